// Compiled with -mavx2 -mfma; only reached through avx2_table() after a
// runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace mlm::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
        _mm256_storeu_pd(y + i + 4,
                         _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
    }
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum_squares(const double* x, std::size_t n) { return dot(x, x, n); }

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_max_pd(acc, abs_pd(d));
    }
    double out = hmax(acc);
    for (; i < n; ++i) out = std::fmax(out, std::fabs(a[i] - b[i]));
    return out;
}

double max_abs(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
    double out = hmax(acc);
    for (; i < n; ++i) out = std::fmax(out, std::fabs(x[i]));
    return out;
}

void soft_threshold(const double* in, const std::uint8_t* mask, double thr,
                    double* out, std::size_t n) {
    const __m256d vthr = _mm256_set1_pd(thr);
    const __m256d vneg = _mm256_set1_pd(-thr);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d u = _mm256_loadu_pd(in + i);
        const __m256d above = _mm256_cmp_pd(u, vthr, _CMP_GT_OQ);
        const __m256d below = _mm256_cmp_pd(u, vneg, _CMP_LT_OQ);
        __m256d shrunk = _mm256_blendv_pd(zero, _mm256_sub_pd(u, vthr), above);
        shrunk = _mm256_blendv_pd(shrunk, _mm256_add_pd(u, vthr), below);
        // Widen the four mask bytes to 64-bit lanes (0 or all-ones).
        std::uint32_t bytes;
        __builtin_memcpy(&bytes, mask + i, sizeof bytes);
        const __m256i lanes = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(bytes)));
        const __m256d penalized =
            _mm256_castsi256_pd(_mm256_cmpgt_epi64(lanes, _mm256_setzero_si256()));
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(u, shrunk, penalized));
    }
    for (; i < n; ++i) {
        const double u = in[i];
        if (!mask[i]) {
            out[i] = u;
        } else if (u > thr) {
            out[i] = u - thr;
        } else if (u < -thr) {
            out[i] = u + thr;
        } else {
            out[i] = 0.0;
        }
    }
}

void prox_divide(const double* a, const double* b, const double* d, double rho,
                 double* out, std::size_t n) {
    const __m256d vrho = _mm256_set1_pd(rho);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d num = _mm256_fmadd_pd(vrho, _mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d den = _mm256_add_pd(vrho, _mm256_loadu_pd(d + i));
        _mm256_storeu_pd(out + i, _mm256_div_pd(num, den));
    }
    for (; i < n; ++i) out[i] = (rho * a[i] + b[i]) / (rho + d[i]);
}

double bilinear(const double* x, const double* r, std::size_t ld,
                std::size_t rows, std::size_t cols, const double* z) {
    double acc = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
        if (z[k] == 0.0) continue;
        acc += z[k] * dot(x, r + k * ld, rows);
    }
    return acc;
}

void rank1_update(double alpha, const double* x, const double* z, double* r,
                  std::size_t ld, std::size_t rows, std::size_t cols) {
    for (std::size_t k = 0; k < cols; ++k) {
        const double scale = alpha * z[k];
        if (scale == 0.0) continue;
        axpy(-scale, x, r + k * ld, rows);
    }
}

const KernelTable kTable{
    "avx2",       &dot,         &axpy,          &sum_squares,
    &max_abs_diff, &max_abs,    &soft_threshold, &prox_divide,
    &bilinear,    &rank1_update,
};

}  // namespace

const KernelTable& avx2_impl() { return kTable; }

}  // namespace mlm::kernels::detail
