#pragma once

#include <optional>
#include <vector>

namespace mdcrow::eval {

double mean(const std::vector<double>& x);
double population_sd(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x);

// Coefficient of variation sd/mean (population sd); absent when mean == 0.
std::optional<double> coefficient_of_variation(const std::vector<double>& x);

// 1-based ranks, ties get the average rank.
std::vector<double> average_ranks(const std::vector<double>& x);

struct Correlation {
    double rho = 0.0;
    double p_value = 1.0;
    bool defined = true;  // false when either input is constant
};

// Spearman rho with two-sided p from t = rho*sqrt((n-2)/(1-rho^2)), df n-2.
Correlation spearman(const std::vector<double>& x, const std::vector<double>& y);

struct TTest {
    double t = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    bool degenerate = false;  // both variances zero
};

struct TTestOptions {
    bool pooled = false;     // equal-variance Student test instead of Welch
    bool two_sided = true;   // one-sided alternative is mean(a) > mean(b)
};

TTest two_sample_t_test(const std::vector<double>& a, const std::vector<double>& b, const TTestOptions& opt);

// Welch two-sample t-test, two-sided.
TTest welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Two-sided p of Student's t with df degrees of freedom.
double t_two_sided_p(double t, double df);

} // namespace mdcrow::eval
