#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace mlm::kernels {

const KernelTable& scalar_table() { return detail::scalar_impl(); }

const KernelTable* avx2_table() {
#if defined(MLM_HAVE_AVX2)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    return supported ? &detail::avx2_impl() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& table = []() -> const KernelTable& {
        const char* forced = std::getenv("MLM_SIMD");
        if (forced != nullptr && std::string_view(forced) == "scalar") {
            return scalar_table();
        }
        if (const KernelTable* simd = avx2_table()) return *simd;
        return scalar_table();
    }();
    return table;
}

}  // namespace mlm::kernels
