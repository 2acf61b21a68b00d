#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmaxent/kernels.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace qmaxent;
namespace k = qmaxent::kernels;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<double> random_positive(std::size_t n, std::uint64_t seed,
                                    double lo = 1e-12, double hi = 1e6,
                                    double zero_frac = 0.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    std::uniform_real_distribution<double> z(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = z(eng) < zero_frac ? 0.0 : std::exp(u(eng));
    return v;
}

void check_close(double a, double b, double rel = 1e-13, double abs = 1e-300) {
    if (std::isinf(a) || std::isinf(b)) {
        CHECK(a == b);
        return;
    }
    CHECK(std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b))));
}

} // namespace

TEST_CASE("scalar reductions match hand values") {
    const auto& ops = k::scalar_ops();
    const double x[] = {0.5, 0.25, 0.25};
    CHECK(ops.sum(x, 3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ops.neg_sum_xlogx(x, 3) ==
          doctest::Approx(1.0397207708399179).epsilon(1e-14));
    CHECK(ops.sum_pow(x, 3, 2.0) == doctest::Approx(0.375).epsilon(1e-15));

    const double p[] = {1.0, 0.0};
    const double r[] = {0.5, 0.5};
    bool div = false;
    CHECK(ops.sum_xlog_ratio(p, r, 2, &div) ==
          doctest::Approx(0.6931471805599453).epsilon(1e-14));
    CHECK_FALSE(div);
    ops.sum_xlog_ratio(r, p, 2, &div); // mass where the reference vanishes
    CHECK(div);
}

TEST_CASE("scalar compensated sum beats naive on adversarial input") {
    std::vector<double> v(1000, 0.0316227766016838);
    const double s = k::scalar_ops().sum(v.data(), v.size());
    CHECK(std::abs(s - 1000 * 0.0316227766016838) < 1e-13);
}

TEST_CASE("log_sum_exp handles -inf entries and empty input") {
    const auto& ops = k::scalar_ops();
    const double x[] = {-kInf, 0.0, -kInf};
    CHECK(ops.log_sum_exp(x, 3) == doctest::Approx(0.0));
    const double allinf[] = {-kInf, -kInf};
    CHECK(ops.log_sum_exp(allinf, 2) == -kInf);
    CHECK(ops.log_sum_exp(nullptr, 0) == -kInf);
}

TEST_CASE("kernel selection honors names and rejects junk") {
    CHECK_NOTHROW(k::select("scalar"));
    CHECK(std::string(k::active().name) == "scalar");
    CHECK_THROWS(k::select("sse9"));
    k::select("auto");
}

TEST_CASE("avx2 kernels agree with scalar" * doctest::skip(!k::cpu_has_avx2())) {
    const auto& sc = k::scalar_ops();
    const auto& vx = *k::avx2_ops();

    for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 33, 100, 1001}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            auto a = random_positive(n, seed, 1e-9, 1e5, 0.15);
            auto b = random_positive(n, seed + 99, 1e-9, 1e5, 0.15);

            check_close(sc.sum(a.data(), n), vx.sum(a.data(), n));
            check_close(sc.dot(a.data(), b.data(), n), vx.dot(a.data(), b.data(), n));
            check_close(sc.neg_sum_xlogx(a.data(), n), vx.neg_sum_xlogx(a.data(), n),
                        1e-13, 1e-12);
            for (double q : {0.25, 0.5, 1.0, 1.7, 2.0, 3.0})
                check_close(sc.sum_pow(a.data(), n, q), vx.sum_pow(a.data(), n, q),
                            5e-13);

            bool d1 = false, d2 = false;
            const double r1 = sc.sum_xlog_ratio(a.data(), b.data(), n, &d1);
            const double r2 = vx.sum_xlog_ratio(a.data(), b.data(), n, &d2);
            CHECK(d1 == d2);
            if (!d1) check_close(r1, r2, 1e-13, 1e-10);
        }
    }
}

TEST_CASE("avx2 elementwise exp/log/pow accuracy" * doctest::skip(!k::cpu_has_avx2())) {
    const auto& vx = *k::avx2_ops();
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> u(-700.0, 700.0);

    std::vector<double> x(4096), out(4096);
    for (auto& v : x) v = u(eng);
    vx.exp_fill(out.data(), x.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ref = std::exp(x[i]);
        CHECK(std::abs(out[i] - ref) <= 4e-15 * ref);
    }

    std::uniform_real_distribution<double> ul(std::log(1e-300), std::log(1e300));
    for (auto& v : x) v = std::exp(ul(eng));
    vx.log_fill(out.data(), x.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ref = std::log(x[i]);
        CHECK(std::abs(out[i] - ref) <=
              std::max(4e-15 * std::abs(ref), 1.5e-16));
    }

    for (double a : {-2.5, -1.0, 0.3, 1.0, 2.0, 7.5}) {
        std::uniform_real_distribution<double> ub(std::log(1e-30), std::log(1e30));
        for (auto& v : x) v = std::exp(ub(eng));
        vx.pow_fill(out.data(), x.data(), a, x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double ref = std::pow(x[i], a);
            CHECK(std::abs(out[i] - ref) <= 1e-13 * ref);
        }
    }

    // conventions at the edges
    const double edge[] = {0.0, -kInf};
    double eo[2];
    vx.exp_fill(eo, edge + 1, 1);
    CHECK(eo[0] == 0.0);
    vx.log_fill(eo, edge, 1);
    CHECK(eo[0] == -kInf);
    const double npow[] = {0.0, 1e300};
    vx.pow_fill(eo, npow, -0.5, 2);
    CHECK(eo[0] == 0.0);
    CHECK(eo[1] == doctest::Approx(1e-150).epsilon(1e-12));
}

TEST_CASE("avx2 log_sum_exp matches scalar on mixed finite/-inf input"
          * doctest::skip(!k::cpu_has_avx2())) {
    const auto& sc = k::scalar_ops();
    const auto& vx = *k::avx2_ops();
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> u(-50.0, 30.0);
    std::uniform_real_distribution<double> z(0.0, 1.0);
    for (std::size_t n : {1, 2, 4, 5, 17, 101, 1000}) {
        std::vector<double> x(n);
        for (auto& v : x) v = z(eng) < 0.2 ? -kInf : u(eng);
        check_close(sc.log_sum_exp(x.data(), n), vx.log_sum_exp(x.data(), n), 1e-13,
                    1e-13);
    }
}
