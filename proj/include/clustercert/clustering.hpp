#pragma once

#include <stdexcept>
#include <vector>

#include "clustercert/geometry.hpp"
#include "clustercert/seminorms.hpp"

namespace clustercert {

/// One clustering request: level c, mass fraction alpha, seminorm budget
/// gamma, clustering defect delta, level reduction lambda, and (s, p).
struct ClusterQuery {
    double c;
    double alpha;
    double gamma;
    double delta;
    double lambda;
    FractionalParams params;

    ClusterQuery(double c, double alpha, double gamma, double delta,
                 double lambda, FractionalParams params);
};

/// Classification of the depth-k partition: a subcube belongs to the plus
/// class when its superlevel cell count at level c reaches (alpha/2) of its
/// cells. The counting bound says the plus class must then occupy more than
/// alpha/(2-alpha) of the partition whenever the global mass hypothesis holds.
struct PartitionReport {
    int k = 1;
    std::vector<std::vector<int>> plus_indices;
    long long plus_count = 0;
    double clu1_lhs = 0.0;  ///< plus_count
    double clu1_rhs = 0.0;  ///< alpha/(2-alpha) * k^N
    bool clu1_holds = false;
};

struct HypothesisA {
    bool passed = false;
    double fraction = 0.0;   ///< superlevel measure / r^N
    double measure = 0.0;
    double threshold = 0.0;  ///< alpha * r^N
};

struct HypothesisB {
    bool passed = false;
    double gamma_measured = 0.0;  ///< seminorm / (c * r^((N-ps)/p))
    double seminorm = 0.0;
    double budget = 0.0;          ///< gamma * c * r^((N-ps)/p)
};

/// Explicit worst-case partition depth extracted from the terminal bound of
/// the search dichotomy, with the bound B itemized for audit.
struct KStarBound {
    double bound = 0.0;  ///< B = 4^p (2-alpha) N^((N+ps)/2) gamma^p / (alpha^(p+1) (1-lambda)^p delta)
    int k_star = 2;      ///< max(2, floor(B^(1/(ps))) + 1)
    double eta_lower_bound = 0.0;  ///< 1 / k_star
};

struct ClusterCertificate {
    bool found = false;
    int k = 0;
    double eta = 0.0;              ///< 1/k
    std::vector<double> x1;        ///< center of the witness subcube
    std::vector<int> witness_index;
    double fraction = 0.0;         ///< strict superlevel fraction at lambda*c

    std::vector<int> checked_ks;   ///< divisors of m tried, ascending
    std::vector<long long> plus_counts;  ///< plus-class size per checked k
    long long non_divisors_skipped = 0;
    int k_star = 2;
    double best_fraction = 0.0;    ///< best witness fraction seen before stopping

    HypothesisA hyp_a;
    HypothesisB hyp_b;
    double alpha_measured = 0.0;
    double gamma_measured = 0.0;
};

/// Raised when no divisor of m lies in [2, k_star], so no partition depth can
/// be examined exactly.
class search_infeasible_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Measure of the strict superlevel set {u > c}: cell count times cell
/// volume, exact for grid functions.
double superlevel_measure(const GridFunction& u, double c);

/// Mass hypothesis: superlevel measure strictly above alpha * r^N.
HypothesisA check_hypothesis_a(const GridFunction& u, double c, double alpha);

/// Seminorm hypothesis: gagliardo(u) <= gamma * c * r^((N-ps)/p).
/// Boundary equality passes.
HypothesisB check_hypothesis_b(const GridFunction& u, const ClusterQuery& query,
                               int workers = 0);

/// Exact cell counting per subcube of the depth-k partition. Requires k | m,
/// k >= 1. Ties at level c count as not exceeding; the class threshold is
/// inclusive.
PartitionReport classify_partition(const GridFunction& u, double c,
                                   double alpha, int k);

KStarBound k_star_bound(const ClusterQuery& query, int dim);
int k_star(const ClusterQuery& query, int dim);

/// Certificate search: k runs over the divisors of m in [2, k_star] in
/// increasing order; within each depth the plus-class subcubes are scanned in
/// lexicographic order for the first one whose strict superlevel fraction at
/// level lambda*c exceeds 1 - delta. Hypothesis failures are recorded, not
/// fatal: the search proceeds regardless so the sharpness of the hypotheses
/// can be probed. Throws search_infeasible_error when no admissible depth
/// exists.
ClusterCertificate cluster_search(const GridFunction& u,
                                  const ClusterQuery& query, int workers = 0);

}  // namespace clustercert
