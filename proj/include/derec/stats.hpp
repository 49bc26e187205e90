#pragma once

#include <vector>

namespace derec {

// Discrete distribution on a strictly increasing support.
struct EmpiricalDist {
    std::vector<double> support;
    std::vector<double> weights;

    void validate() const;
};

EmpiricalDist make_empirical(std::vector<double> values);
EmpiricalDist make_empirical_weighted(std::vector<double> values, std::vector<double> weights);

struct KsResult {
    double d = 0.0;
    double p = 1.0;
};

// sup_t |ECDF_x(t) - ECDF_y(t)|, ties handled through the merged support.
double ks_statistic(std::vector<double> x, std::vector<double> y);

// Survival function of the Kolmogorov distribution,
// Q(lambda) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_sf(double lambda);

// Two-sample test. Exact permutation-distribution p-value when the pooled
// size is small enough to enumerate; asymptotic Kolmogorov tail with
// effective size mn/(m+n) otherwise. D == 0 gives p == 1 exactly.
KsResult ks_two_sample(const std::vector<double>& x, const std::vector<double>& y);

inline constexpr std::size_t kKsExactMaxPooled = 10;

// W1 = integral of |CDF_p - CDF_q| over the merged support.
double wasserstein_1d(const EmpiricalDist& p, const EmpiricalDist& q);
double wasserstein_samples(const std::vector<double>& x, const std::vector<double>& y);

// Even-sized input averages the two middle order statistics.
double median(std::vector<double> values);

double mean(const std::vector<double>& values);

}  // namespace derec
