#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmaxent/chain.hpp"
#include "qmaxent/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

using namespace qmaxent;

namespace {

ScalingSeries series_from(const std::vector<long>& ns,
                          const std::function<double(long)>& f) {
    std::vector<ScalingPoint> pts;
    for (long n : ns) pts.push_back({n, f(n)});
    return ScalingSeries(std::move(pts));
}

const std::vector<long> kSmall = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};

} // namespace

TEST_CASE("series validation") {
    CHECK_THROWS_AS(ScalingSeries({{1, 2.0}, {2, 4.0}, {3, 8.0}}), InsufficientPoints);
    CHECK_THROWS_AS(ScalingSeries({{1, 2.0}, {2, 4.0}, {2, 4.0}, {3, 8.0}}),
                    InvalidArgument);
    CHECK_THROWS_AS(ScalingSeries({{1, 2.0}, {2, -4.0}, {3, 8.0}, {4, 1.0}}),
                    InvalidArgument);
    // unsorted input is sorted on construction
    const ScalingSeries s({{4, 16.0}, {2, 4.0}, {3, 8.0}, {5, 32.0}});
    CHECK(s.points.front().n == 2);
    CHECK(s.points.back().n == 5);
}

TEST_CASE("exact exponential series") {
    const auto v = fit_scaling(series_from(kSmall, [](long n) {
        return std::pow(2.0, static_cast<double>(n));
    }));
    CHECK(v.model == GrowthModel::exponential);
    CHECK(v.recommendation == Recommendation::shannon);
    CHECK(v.exponential_fit.slope ==
          doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(v.exponential_fit.rss < 1e-12);
    CHECK_FALSE(v.superexponential_hint);
    CHECK(recommend(v).find("Shannon") != std::string::npos);
}

TEST_CASE("exact power-law series") {
    const auto v = fit_scaling(series_from(kSmall, [](long n) {
        return 3.0 * std::pow(static_cast<double>(n), 2.5);
    }));
    CHECK(v.model == GrowthModel::power_law);
    CHECK(v.recommendation == Recommendation::generalized_q);
    CHECK(v.powerlaw_fit.slope == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(v.powerlaw_fit.rss < 1e-12);
    CHECK(recommend(v).find("q") != std::string::npos);
}

TEST_CASE("chain phase-space counts classify as power law") {
    std::vector<long> ns;
    for (long n = 40; n <= 200; n += 10) ns.push_back(n);
    const auto v = fit_scaling(series_from(ns, [](long n) {
        return total_phase_space(ChainSpec(static_cast<int>(n), 4))
            .exact.convert_to<double>();
    }));
    CHECK(v.model == GrowthModel::power_law);
    // finite-size bias: the local log-slope is 4 + 10/n + O(1/n^2), so the
    // fitted exponent sits a little above d over this range
    CHECK(v.powerlaw_fit.slope == doctest::Approx(4.12).epsilon(0.02));
}

TEST_CASE("flat series resolves to power-law with exponent ~ 0") {
    const auto v =
        fit_scaling(series_from(kSmall, [](long) { return 7.5; }));
    CHECK(v.model == GrowthModel::power_law);
    CHECK(std::abs(v.powerlaw_fit.slope) < 1e-12);
}

TEST_CASE("verdict is scale invariant") {
    for (double scale : {1e-6, 1.0, 1e6}) {
        const auto ve = fit_scaling(series_from(kSmall, [scale](long n) {
            return scale * std::pow(2.0, static_cast<double>(n));
        }));
        CHECK(ve.model == GrowthModel::exponential);
        CHECK(ve.exponential_fit.slope ==
              doctest::Approx(std::log(2.0)).epsilon(1e-9));
        const auto vp = fit_scaling(series_from(kSmall, [scale](long n) {
            return scale * std::pow(static_cast<double>(n), 3.0);
        }));
        CHECK(vp.model == GrowthModel::power_law);
        CHECK(vp.powerlaw_fit.slope == doctest::Approx(3.0).epsilon(1e-9));
    }
}

TEST_CASE("verdict is order independent") {
    std::vector<ScalingPoint> pts;
    for (long n : kSmall) pts.push_back({n, std::pow(2.0, static_cast<double>(n))});
    std::mt19937_64 eng(5);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(pts.begin(), pts.end(), eng);
        const auto v = fit_scaling(ScalingSeries(pts));
        CHECK(v.model == GrowthModel::exponential);
        CHECK(v.exponential_fit.slope == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    }
}

TEST_CASE("noisy data between the models is inconclusive") {
    // log-linear in sqrt(n): misfits both hypotheses comparably
    const auto v = fit_scaling(series_from(kSmall, [](long n) {
        return std::exp(3.0 * std::sqrt(static_cast<double>(n)));
    }));
    CHECK(v.model == GrowthModel::inconclusive);
    CHECK(v.recommendation == Recommendation::inspect);
    CHECK(recommend(v).find("inspect") != std::string::npos);
}

TEST_CASE("super-exponential growth is flagged") {
    const auto v = fit_scaling(series_from(kSmall, [](long n) {
        return std::exp(0.05 * static_cast<double>(n) * static_cast<double>(n));
    }));
    CHECK(v.superexponential_hint);
    CHECK(recommend(v).find("super-exponential") != std::string::npos);
}
