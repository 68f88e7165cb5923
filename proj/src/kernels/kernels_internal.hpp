#pragma once

#include "mlm/kernels.hpp"

namespace mlm::kernels::detail {

const KernelTable& scalar_impl();
#if defined(MLM_HAVE_AVX2)
const KernelTable& avx2_impl();
#endif

}  // namespace mlm::kernels::detail
