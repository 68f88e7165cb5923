#include <doctest.h>

#include <vector>

#include "mlm/kernels.hpp"
#include "mlm/rng.hpp"

using mlm::Rng;
namespace k = mlm::kernels;

namespace {

std::vector<double> draw(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal(0.0, 3.0);
    return v;
}

// Sizes straddle the 4-wide vector width and its tail handling.
const std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 9, 16, 31, 64, 257};

}  // namespace

TEST_CASE("active table is one of the known variants") {
    const auto& active = k::active();
    const bool known = active.name == k::scalar_table().name ||
                       (k::avx2_table() && active.name == k::avx2_table()->name);
    CHECK(known);
}

TEST_CASE("scalar kernels compute their definitions") {
    const auto& s = k::scalar_table();
    const double a[] = {1, 2, 3};
    const double b[] = {4, -5, 6};
    CHECK(s.dot(a, b, 3) == doctest::Approx(12));
    CHECK(s.sum_squares(b, 3) == doctest::Approx(77));
    CHECK(s.max_abs(b, 3) == 6);
    CHECK(s.max_abs_diff(a, b, 3) == 7);

    double out[4];
    const double in[] = {2.0, 0.3, -5.0, -0.1};
    const std::uint8_t mask[] = {1, 1, 1, 0};
    s.soft_threshold(in, mask, 1.0, out, 4);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == -4.0);
    CHECK(out[3] == -0.1);  // unpenalized entry passes through

    const double d[] = {1.0, 3.0, 0.0};
    s.prox_divide(a, b, d, 2.0, out, 3);
    CHECK(out[0] == doctest::Approx((2 * 1 + 4) / 3.0));
    CHECK(out[1] == doctest::Approx((2 * 2 - 5) / 5.0));
    CHECK(out[2] == doctest::Approx((2 * 3 + 6) / 2.0));

    // R is 2x2 column-major in a 3-row buffer.
    double R[] = {1, 2, 99, 3, 4, 99};
    const double x[] = {1, -1};
    const double z[] = {2, 1};
    CHECK(s.bilinear(x, R, 3, 2, 2, z) == doctest::Approx(1 * 2 - 2 * 2 + 3 - 4));
    s.rank1_update(0.5, x, z, R, 3, 2, 2);
    CHECK(R[0] == 0.0);
    CHECK(R[1] == 3.0);
    CHECK(R[2] == 99);
    CHECK(R[3] == 2.5);
    CHECK(R[4] == 4.5);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
    const k::KernelTable* v = k::avx2_table();
    if (!v) {
        MESSAGE("AVX2 variant unavailable on this machine; skipped");
        return;
    }
    const auto& s = k::scalar_table();
    Rng rng(11);
    for (std::size_t n : kSizes) {
        CAPTURE(n);
        const auto a = draw(rng, n);
        const auto b = draw(rng, n);
        auto d = draw(rng, n);
        for (auto& x : d) x = x * x;
        std::vector<std::uint8_t> mask(n);
        for (auto& m : mask) m = rng.bernoulli(0.7) ? 1 : 0;

        CHECK(v->dot(a.data(), b.data(), n) == doctest::Approx(s.dot(a.data(), b.data(), n)).epsilon(1e-13));
        CHECK(v->sum_squares(a.data(), n) == doctest::Approx(s.sum_squares(a.data(), n)).epsilon(1e-13));
        CHECK(v->max_abs(a.data(), n) == s.max_abs(a.data(), n));
        CHECK(v->max_abs_diff(a.data(), b.data(), n) == s.max_abs_diff(a.data(), b.data(), n));

        // Elementwise kernels have no reassociation and must match exactly.
        std::vector<double> ys(b), yv(b);
        s.axpy(0.37, a.data(), ys.data(), n);
        v->axpy(0.37, a.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(yv[i] == doctest::Approx(ys[i]).epsilon(1e-15));

        std::vector<double> ts(n), tv(a);
        s.soft_threshold(a.data(), mask.data(), 1.3, ts.data(), n);
        v->soft_threshold(tv.data(), mask.data(), 1.3, tv.data(), n);  // in place
        CHECK(ts == tv);

        std::vector<double> ps(n), pv(n);
        s.prox_divide(a.data(), b.data(), d.data(), 0.8, ps.data(), n);
        v->prox_divide(a.data(), b.data(), d.data(), 0.8, pv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(pv[i] == doctest::Approx(ps[i]).epsilon(1e-15));
    }

    for (std::size_t rows : {1u, 3u, 4u, 9u, 33u}) {
        for (std::size_t cols : {1u, 2u, 5u}) {
            CAPTURE(rows);
            CAPTURE(cols);
            const std::size_t ld = rows + 2;
            const auto R = draw(rng, ld * cols);
            const auto x = draw(rng, rows);
            const auto z = draw(rng, cols);
            CHECK(v->bilinear(x.data(), R.data(), ld, rows, cols, z.data()) ==
                  doctest::Approx(s.bilinear(x.data(), R.data(), ld, rows, cols, z.data())).epsilon(1e-12));
            auto Rs = R, Rv = R;
            s.rank1_update(-0.6, x.data(), z.data(), Rs.data(), ld, rows, cols);
            v->rank1_update(-0.6, x.data(), z.data(), Rv.data(), ld, rows, cols);
            for (std::size_t i = 0; i < R.size(); ++i) CHECK(Rv[i] == doctest::Approx(Rs[i]).epsilon(1e-14));
        }
    }
}
