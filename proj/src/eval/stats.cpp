#include "mdcrow/eval/stats.hpp"

#include "mdcrow/common/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mdcrow::eval {

double mean(const std::vector<double>& x) {
    if (x.empty()) throw UsageError("mean of an empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double population_sd(const std::vector<double>& x) {
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return std::sqrt(acc / static_cast<double>(x.size()));
}

double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) throw UsageError("sample variance needs at least 2 values");
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size() - 1);
}

std::optional<double> coefficient_of_variation(const std::vector<double>& x) {
    const double m = mean(x);
    if (m == 0.0) return std::nullopt;
    return population_sd(x) / m;
}

std::vector<double> average_ranks(const std::vector<double>& x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

double t_two_sided_p(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

Correlation spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw UsageError("spearman: inputs differ in length");
    if (x.size() < 3) throw UsageError("spearman needs at least 3 pairs");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double mx = mean(rx), my = mean(ry);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    Correlation c;
    if (sxx == 0.0 || syy == 0.0) {
        c.defined = false;
        c.rho = std::numeric_limits<double>::quiet_NaN();
        c.p_value = std::numeric_limits<double>::quiet_NaN();
        return c;
    }
    c.rho = sxy / std::sqrt(sxx * syy);
    const double n = static_cast<double>(x.size());
    if (std::abs(c.rho) >= 1.0) {
        c.p_value = 0.0;
    } else {
        const double t = c.rho * std::sqrt((n - 2.0) / (1.0 - c.rho * c.rho));
        c.p_value = t_two_sided_p(t, n - 2.0);
    }
    return c;
}

TTest two_sample_t_test(const std::vector<double>& a, const std::vector<double>& b, const TTestOptions& opt) {
    if (a.size() < 2 || b.size() < 2) throw UsageError("t-test needs at least 2 values per group");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double sa = sample_variance(a), sb = sample_variance(b);
    const double diff = mean(a) - mean(b);
    TTest r;
    double se2 = 0.0;
    if (opt.pooled) {
        r.df = na + nb - 2.0;
        const double sp = ((na - 1.0) * sa + (nb - 1.0) * sb) / r.df;
        se2 = sp * (1.0 / na + 1.0 / nb);
    } else {
        const double va = sa / na, vb = sb / nb;
        se2 = va + vb;
        r.df = se2 > 0 ? se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0)) : na + nb - 2.0;
    }
    if (se2 == 0.0) {
        r.degenerate = true;
        r.t = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
        if (diff == 0.0)
            r.p_value = 1.0;
        else
            r.p_value = (opt.two_sided || diff > 0) ? 0.0 : 1.0;
        return r;
    }
    r.t = diff / std::sqrt(se2);
    if (opt.two_sided) {
        r.p_value = t_two_sided_p(r.t, r.df);
    } else {
        boost::math::students_t dist(r.df);
        r.p_value = boost::math::cdf(boost::math::complement(dist, r.t));
    }
    return r;
}

TTest welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    return two_sample_t_test(a, b, {});
}

} // namespace mdcrow::eval
