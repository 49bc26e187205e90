#include "derec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "derec/error.hpp"

namespace derec {

void EmpiricalDist::validate() const {
    if (support.size() != weights.size() || support.empty()) {
        throw EmptySample("empirical distribution malformed");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i > 0 && !(support[i - 1] < support[i])) {
            throw EmptySample("empirical support not strictly increasing");
        }
        if (weights[i] < 0) throw EmptySample("negative weight");
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw EmptySample("weights do not sum to 1");
}

EmpiricalDist make_empirical(std::vector<double> values) {
    if (values.empty()) throw EmptySample("empty sample");
    std::sort(values.begin(), values.end());
    EmpiricalDist dist;
    const double w = 1.0 / static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (dist.support.empty() || dist.support.back() != values[i]) {
            dist.support.push_back(values[i]);
            dist.weights.push_back(w);
        } else {
            dist.weights.back() += w;
        }
    }
    return dist;
}

EmpiricalDist make_empirical_weighted(std::vector<double> values, std::vector<double> weights) {
    if (values.empty() || values.size() != weights.size()) {
        throw EmptySample("weighted sample malformed");
    }
    std::map<double, double> acc;
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc[values[i]] += weights[i];
        total += weights[i];
    }
    if (total <= 0) throw EmptySample("weights sum to zero");
    EmpiricalDist dist;
    for (const auto& [v, w] : acc) {
        dist.support.push_back(v);
        dist.weights.push_back(w / total);
    }
    return dist;
}

double ks_statistic(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty()) throw EmptySample("ks_statistic needs two non-empty samples");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double m = static_cast<double>(x.size());
    const double n = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() || j < y.size()) {
        double v = (i < x.size() && (j >= y.size() || x[i] <= y[j])) ? x[i] : y[j];
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
    }
    return d;
}

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.18) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1;; ++j) {
        double term = std::exp(-2.0 * j * j * lambda * lambda);
        if (term < 1e-12) break;
        sum += sign * term;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

// p = P(D >= d_observed) over every way of splitting the pooled multiset
// back into sizes (m, n).
double ks_exact_permutation_p(const std::vector<double>& x, const std::vector<double>& y,
                              double d_obs) {
    std::vector<double> pool(x);
    pool.insert(pool.end(), y.begin(), y.end());
    const std::size_t total = pool.size();
    const std::size_t m = x.size();

    std::vector<std::size_t> comb(m);
    std::iota(comb.begin(), comb.end(), 0);
    long long hits = 0, splits = 0;
    std::vector<double> a(m), b(total - m);
    while (true) {
        std::size_t ai = 0, bi = 0, next = 0;
        for (std::size_t k = 0; k < total; ++k) {
            if (next < m && comb[next] == k) {
                a[ai++] = pool[k];
                ++next;
            } else {
                b[bi++] = pool[k];
            }
        }
        ++splits;
        if (ks_statistic(a, b) >= d_obs - 1e-12) ++hits;

        // next combination in lexicographic order
        std::size_t pos = m;
        while (pos > 0 && comb[pos - 1] == total - m + pos - 1) --pos;
        if (pos == 0) break;
        ++comb[pos - 1];
        for (std::size_t k = pos; k < m; ++k) comb[k] = comb[k - 1] + 1;
    }
    return static_cast<double>(hits) / static_cast<double>(splits);
}

}  // namespace

KsResult ks_two_sample(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || y.empty()) throw EmptySample("ks_two_sample needs two non-empty samples");
    KsResult r;
    r.d = ks_statistic(x, y);
    if (r.d == 0.0) {
        r.p = 1.0;
        return r;
    }
    const std::size_t m = x.size(), n = y.size();
    if (m + n <= kKsExactMaxPooled) {
        r.p = ks_exact_permutation_p(x, y, r.d);
        return r;
    }
    const double en = static_cast<double>(m) * static_cast<double>(n) /
                      static_cast<double>(m + n);
    r.p = kolmogorov_sf(std::sqrt(en) * r.d);
    return r;
}

double wasserstein_1d(const EmpiricalDist& p, const EmpiricalDist& q) {
    p.validate();
    q.validate();
    double w = 0.0;
    double fp = 0.0, fq = 0.0;
    std::size_t i = 0, j = 0;
    double prev = 0.0;
    bool have_prev = false;
    while (i < p.support.size() || j < q.support.size()) {
        double v;
        if (i < p.support.size() && (j >= q.support.size() || p.support[i] <= q.support[j])) {
            v = p.support[i];
        } else {
            v = q.support[j];
        }
        if (have_prev) w += std::abs(fp - fq) * (v - prev);
        while (i < p.support.size() && p.support[i] == v) fp += p.weights[i++];
        while (j < q.support.size() && q.support[j] == v) fq += q.weights[j++];
        prev = v;
        have_prev = true;
    }
    return w;
}

double wasserstein_samples(const std::vector<double>& x, const std::vector<double>& y) {
    return wasserstein_1d(make_empirical(x), make_empirical(y));
}

double median(std::vector<double> values) {
    if (values.empty()) throw EmptySample("median of empty list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double mean(const std::vector<double>& values) {
    if (values.empty()) throw EmptySample("mean of empty list");
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

}  // namespace derec
