#pragma once

// Elementwise and reduction kernels behind the solvers' inner loops.
//
// Every kernel has a scalar reference implementation; on x86-64 an AVX2/FMA
// variant is compiled into its own translation unit and picked at runtime
// when the CPU supports it. Setting MLM_SIMD=scalar in the environment
// forces the reference table. All matrices are column-major with an explicit
// leading dimension.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace mlm::kernels {

struct KernelTable {
    std::string_view name;

    /// sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);

    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    /// sum_i x[i]^2
    double (*sum_squares)(const double* x, std::size_t n);

    /// max_i |a[i] - b[i]|
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);

    /// max_i |x[i]|
    double (*max_abs)(const double* x, std::size_t n);

    /// out[i] = mask[i] ? S_thr(in[i]) : in[i]; in and out may alias.
    void (*soft_threshold)(const double* in, const std::uint8_t* mask,
                           double thr, double* out, std::size_t n);

    /// out[i] = (rho * a[i] + b[i]) / (rho + d[i]); out may alias a or b.
    void (*prox_divide)(const double* a, const double* b, const double* d,
                        double rho, double* out, std::size_t n);

    /// x' R z for R (rows x cols, leading dimension ld).
    double (*bilinear)(const double* x, const double* r, std::size_t ld,
                       std::size_t rows, std::size_t cols, const double* z);

    /// R -= alpha * x z' for R (rows x cols, leading dimension ld).
    void (*rank1_update)(double alpha, const double* x, const double* z,
                         double* r, std::size_t ld, std::size_t rows,
                         std::size_t cols);
};

const KernelTable& scalar_table();

/// AVX2 table, or nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_table();

/// Table used by the library: the best supported variant unless MLM_SIMD
/// overrides it. Resolved once per process.
const KernelTable& active();

}  // namespace mlm::kernels
