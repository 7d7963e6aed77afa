#include "clustercert/clustering.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace clustercert {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Superlevel cell count per subcube of the depth-k partition, lexicographic
// subcube order. Strict comparison: ties at the level do not count.
std::vector<long long> subcube_counts(const GridFunction& u, int k, double level) {
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const int m = spec.m();
    const int sub_m = m / k;
    std::size_t groups = 1;
    for (int a = 0; a < n; ++a) groups *= static_cast<std::size_t>(k);
    std::vector<long long> counts(groups, 0);

    const std::vector<double>& v = u.values();
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t fl = 0; fl < v.size(); ++fl) {
        if (v[fl] > level) {
            std::size_t sc = 0;
            for (int a = 0; a < n; ++a)
                sc = sc * static_cast<std::size_t>(k) +
                     static_cast<std::size_t>(idx[static_cast<std::size_t>(a)] / sub_m);
            ++counts[sc];
        }
        for (int a = n - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < m) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return counts;
}

std::vector<int> decode_subcube(std::size_t sc, int k, int dim) {
    std::vector<int> j(static_cast<std::size_t>(dim));
    for (int a = dim - 1; a >= 0; --a) {
        j[static_cast<std::size_t>(a)] = static_cast<int>(sc % static_cast<std::size_t>(k));
        sc /= static_cast<std::size_t>(k);
    }
    return j;
}

double int_pow(int base, int exp) {
    double r = 1.0;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;  // exact: stays far below 2^53 for any admissible grid
}

}  // namespace

ClusterQuery::ClusterQuery(double c_, double alpha_, double gamma_, double delta_,
                           double lambda_, FractionalParams params_)
    : c(c_), alpha(alpha_), gamma(gamma_), delta(delta_), lambda(lambda_),
      params(params_) {
    require(std::isfinite(c) && c > 0.0, "ClusterQuery: level c must be positive");
    require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
            "ClusterQuery: alpha must lie in (0,1)");
    require(std::isfinite(gamma) && gamma > 0.0,
            "ClusterQuery: gamma must be positive");
    require(std::isfinite(delta) && delta > 0.0 && delta < 1.0,
            "ClusterQuery: delta must lie in (0,1)");
    require(std::isfinite(lambda) && lambda > 0.0 && lambda < 1.0,
            "ClusterQuery: lambda must lie in (0,1)");
}

double superlevel_measure(const GridFunction& u, double c) {
    const std::vector<double>& v = u.values();
    long long count = 0;
    for (double x : v)
        if (x > c) ++count;
    // count/M * r^N rather than count * h^N: exact when the superlevel set is
    // the whole cube, and free of the h^N rounding for every other count too.
    const double fraction = static_cast<double>(count) / static_cast<double>(v.size());
    return fraction * std::pow(u.spec().cube().side(), u.spec().dim());
}

HypothesisA check_hypothesis_a(const GridFunction& u, double c, double alpha) {
    require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
            "check_hypothesis_a: alpha must lie in (0,1)");
    const double volume = u.spec().cube().volume();
    HypothesisA h;
    h.measure = superlevel_measure(u, c);
    h.fraction = h.measure / volume;
    h.threshold = alpha * volume;
    h.passed = h.measure > h.threshold;
    return h;
}

HypothesisB check_hypothesis_b(const GridFunction& u, const ClusterQuery& query,
                               int workers) {
    const int n = u.spec().dim();
    const double r = u.spec().cube().side();
    const double scale =
        query.c * std::pow(r, (n - query.params.p * query.params.s) / query.params.p);
    HypothesisB h;
    h.seminorm = gagliardo(u, query.params, workers);
    h.gamma_measured = h.seminorm / scale;
    h.budget = query.gamma * scale;
    h.passed = h.gamma_measured <= query.gamma;
    return h;
}

PartitionReport classify_partition(const GridFunction& u, double c, double alpha,
                                   int k) {
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const int m = spec.m();
    require(k >= 1, "classify_partition: k must be >= 1");
    if (m % k != 0)
        throw std::invalid_argument(
            "classify_partition: depth k must divide the grid resolution m");
    require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
            "classify_partition: alpha must lie in (0,1)");

    const std::vector<long long> counts = subcube_counts(u, k, c);
    const double sub_cells = int_pow(m / k, n);
    const double threshold = 0.5 * alpha * sub_cells;  // inclusive

    PartitionReport report;
    report.k = k;
    for (std::size_t sc = 0; sc < counts.size(); ++sc) {
        if (static_cast<double>(counts[sc]) >= threshold) {
            report.plus_indices.push_back(decode_subcube(sc, k, n));
            ++report.plus_count;
        }
    }
    report.clu1_lhs = static_cast<double>(report.plus_count);
    report.clu1_rhs = alpha / (2.0 - alpha) * int_pow(k, n);
    report.clu1_holds = report.clu1_lhs > report.clu1_rhs;
    return report;
}

KStarBound k_star_bound(const ClusterQuery& query, int dim) {
    require(dim >= 2, "k_star: the clustering bound requires dimension >= 2");
    const double p = query.params.p;
    const double s = query.params.s;
    const double numer = std::pow(4.0, p) * (2.0 - query.alpha) *
                         std::pow(static_cast<double>(dim), 0.5 * (dim + p * s)) *
                         std::pow(query.gamma, p);
    const double denom = std::pow(query.alpha, p + 1.0) *
                         std::pow(1.0 - query.lambda, p) * query.delta;
    KStarBound b;
    b.bound = numer / denom;
    double k = std::floor(std::pow(b.bound, 1.0 / (p * s))) + 1.0;
    if (k < 2.0) k = 2.0;
    const double cap = static_cast<double>(std::numeric_limits<int>::max() / 2);
    b.k_star = static_cast<int>(k < cap ? k : cap);
    b.eta_lower_bound = 1.0 / b.k_star;
    return b;
}

int k_star(const ClusterQuery& query, int dim) {
    return k_star_bound(query, dim).k_star;
}

ClusterCertificate cluster_search(const GridFunction& u, const ClusterQuery& query,
                                  int workers) {
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const int m = spec.m();
    require(n >= 2, "cluster_search: the clustering theorem requires dimension >= 2");

    ClusterCertificate cert;
    cert.hyp_a = check_hypothesis_a(u, query.c, query.alpha);
    cert.hyp_b = check_hypothesis_b(u, query, workers);
    cert.alpha_measured = cert.hyp_a.fraction;
    cert.gamma_measured = cert.hyp_b.gamma_measured;

    const KStarBound bound = k_star_bound(query, n);
    cert.k_star = bound.k_star;

    std::vector<int> divisors;
    for (int k = 2; k <= std::min(bound.k_star, m); ++k)
        if (m % k == 0) divisors.push_back(k);
    cert.non_divisors_skipped =
        static_cast<long long>(bound.k_star) - 1 -
        static_cast<long long>(divisors.size());
    if (divisors.empty())
        throw search_infeasible_error(
            "cluster_search: no divisor of m=" + std::to_string(m) +
            " lies in [2, k_star=" + std::to_string(bound.k_star) +
            "]; refine the grid so m has a divisor in range");

    const double reduced_level = query.lambda * query.c;
    for (int k : divisors) {
        const PartitionReport report = classify_partition(u, query.c, query.alpha, k);
        cert.checked_ks.push_back(k);
        cert.plus_counts.push_back(report.plus_count);

        const std::vector<long long> lambda_counts =
            subcube_counts(u, k, reduced_level);
        const double sub_cells = int_pow(m / k, n);
        for (const std::vector<int>& j : report.plus_indices) {
            std::size_t sc = 0;
            for (int a = 0; a < n; ++a)
                sc = sc * static_cast<std::size_t>(k) +
                     static_cast<std::size_t>(j[static_cast<std::size_t>(a)]);
            const double fraction =
                static_cast<double>(lambda_counts[sc]) / sub_cells;
            if (fraction > cert.best_fraction) cert.best_fraction = fraction;
            if (fraction > 1.0 - query.delta) {
                cert.found = true;
                cert.k = k;
                cert.eta = 1.0 / k;
                cert.witness_index = j;
                cert.x1 = spec.cube().subcube(k, j).center();
                cert.fraction = fraction;
                return cert;
            }
        }
    }
    return cert;
}

}  // namespace clustercert
