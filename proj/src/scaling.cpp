#include "qmaxent/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmaxent {
namespace {

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        f.rss += r * r;
    }
    return f;
}

// One-sided sign test: P(X >= k) for X ~ Binomial(n, 1/2).
double sign_test_p(int k, int n) {
    if (n <= 0) return 1.0;
    double tail = 0.0;
    double coeff = 1.0; // C(n, j) built incrementally
    for (int j = 0; j <= n; ++j) {
        if (j >= k) tail += coeff;
        coeff = coeff * (n - j) / (j + 1);
    }
    return tail * std::pow(0.5, n);
}

} // namespace

ScalingSeries::ScalingSeries(std::vector<ScalingPoint> pts) : points(std::move(pts)) {
    std::sort(points.begin(), points.end(),
              [](const ScalingPoint& a, const ScalingPoint& b) { return a.n < b.n; });
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].w > 0.0))
            throw InvalidArgument("scaling series needs w > 0 at every point");
        if (points[i].n <= 0)
            throw InvalidArgument("scaling series needs n >= 1 at every point");
        if (i > 0 && points[i].n == points[i - 1].n)
            throw InvalidArgument("scaling series has duplicate n = " +
                                  std::to_string(points[i].n));
    }
    if (points.size() < 4)
        throw InsufficientPoints("scaling classification needs >= 4 distinct n values");
}

ScalingVerdict fit_scaling(const ScalingSeries& series) {
    const std::size_t k = series.points.size();
    std::vector<double> n_lin(k), n_log(k), ln_w(k);
    for (std::size_t i = 0; i < k; ++i) {
        n_lin[i] = static_cast<double>(series.points[i].n);
        n_log[i] = std::log(n_lin[i]);
        ln_w[i] = std::log(series.points[i].w);
    }

    ScalingVerdict v;
    v.exponential_fit = least_squares(n_lin, ln_w);
    v.powerlaw_fit = least_squares(n_log, ln_w);

    // Residuals below the floor are "exact" up to accumulated rounding. When
    // both models fit exactly (a flat series) the verdict is power-law: zero
    // growth is not exponential growth. Otherwise the winner needs a 20%
    // relative margin.
    constexpr double kRssFloor = 1e-20;
    const bool exact_p = v.powerlaw_fit.rss <= kRssFloor;
    const bool exact_e = v.exponential_fit.rss <= kRssFloor;
    if (exact_p || v.powerlaw_fit.rss <= 0.8 * v.exponential_fit.rss) {
        v.model = GrowthModel::power_law;
        v.recommendation = Recommendation::generalized_q;
    } else if (exact_e || v.exponential_fit.rss <= 0.8 * v.powerlaw_fit.rss) {
        v.model = GrowthModel::exponential;
        v.recommendation = Recommendation::shannon;
    } else {
        v.model = GrowthModel::inconclusive;
        v.recommendation = Recommendation::inspect;
    }

    if (k >= 5) {
        int pos = 0, total = 0;
        for (std::size_t i = 1; i + 1 < k; ++i) {
            const auto res = [&](std::size_t j) {
                return ln_w[j] - (v.exponential_fit.intercept +
                                  v.exponential_fit.slope * n_lin[j]);
            };
            const double dd = res(i + 1) - 2.0 * res(i) + res(i - 1);
            if (dd != 0.0) {
                ++total;
                if (dd > 0.0) ++pos;
            }
        }
        v.sign_test_p = sign_test_p(pos, total);
        v.superexponential_hint = v.sign_test_p < 0.05;
    }
    return v;
}

std::string recommend(const ScalingVerdict& v) {
    std::ostringstream os;
    switch (v.model) {
        case GrowthModel::exponential:
            os << "Phase-space growth is exponential: W(N) ~ exp(" << v.exponential_fit.slope
               << " N) (log-space rss " << v.exponential_fit.rss << ").\n"
               << "Recommendation: stick with Shannon entropy; run the classical "
                  "maximum-entropy solve for the constrained distribution.";
            break;
        case GrowthModel::power_law:
            os << "Phase-space growth is a power law: W(N) ~ N^" << v.powerlaw_fit.slope
               << " (log-space rss " << v.powerlaw_fit.rss << ").\n"
               << "Recommendation: use the generalized q-entropy family and "
                  "determine the data-driven value of q by maximum likelihood "
                  "(two-step fit over (q, psi)).";
            break;
        case GrowthModel::inconclusive:
            os << "Neither growth model clears the 20% residual margin "
                  "(exponential rss "
               << v.exponential_fit.rss << ", power-law rss " << v.powerlaw_fit.rss
               << ").\nRecommendation: inspect the series manually before "
                  "committing to an entropy family.";
            break;
    }
    if (v.superexponential_hint)
        os << "\nNote: exponential-fit residuals curve upward (sign test p = "
           << v.sign_test_p << "); growth may be super-exponential.";
    return os.str();
}

} // namespace qmaxent
