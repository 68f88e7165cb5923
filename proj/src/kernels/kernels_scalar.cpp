#include <cmath>

#include "kernels_internal.hpp"

namespace mlm::kernels::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_squares(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    double out = 0.0;
    for (std::size_t i = 0; i < n; ++i) out = std::fmax(out, std::fabs(a[i] - b[i]));
    return out;
}

double max_abs(const double* x, std::size_t n) {
    double out = 0.0;
    for (std::size_t i = 0; i < n; ++i) out = std::fmax(out, std::fabs(x[i]));
    return out;
}

void soft_threshold(const double* in, const std::uint8_t* mask, double thr,
                    double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
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
    for (std::size_t i = 0; i < n; ++i) out[i] = (rho * a[i] + b[i]) / (rho + d[i]);
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
    "scalar",     &dot,         &axpy,          &sum_squares,
    &max_abs_diff, &max_abs,    &soft_threshold, &prox_divide,
    &bilinear,    &rank1_update,
};

}  // namespace

const KernelTable& scalar_impl() { return kTable; }

}  // namespace mlm::kernels::detail
