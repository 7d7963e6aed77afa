#pragma once

#include "clustercert/clustering.hpp"
#include "clustercert/geometry.hpp"
#include "clustercert/seminorms.hpp"

namespace clustercert {

enum class ReductionKind { w1p, bv };

/// A gradient-norm or total-variation budget to be converted into a
/// fractional-seminorm budget. The bv kind always carries p = 1.
struct ReductionInput {
    ReductionKind kind;
    double gamma_prime;
    FractionalParams params;

    static ReductionInput w1p(double gamma_prime, FractionalParams params);
    static ReductionInput bv(double gamma_prime, double s);

private:
    ReductionInput(ReductionKind k, double gp, FractionalParams pr);
};

/// gamma = C(N, s, p) * gamma_prime, with C from embedding_constant.
/// The quadrature constant is the default; ball_bound is the rigorous mode.
double reduce_to_fractional(const ReductionInput& input, int dim,
                            EmbeddingMethod method = EmbeddingMethod::quadrature);

enum class ScalingWhich { gagliardo, grad, bv };

/// Rehosts the identical sample array on the unit cube Q_1(0) and compares
/// seminorm(u) against r^e * seminorm(v), e = (N-ps)/p, (N-p)/p, or N-1.
/// Rehosting (not resampling) isolates the pure scaling factor, so the
/// identity holds to rounding.
struct ScalingReport {
    ScalingWhich which;
    double r = 1.0;
    double exponent = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_error = 0.0;
};

ScalingReport verify_scaling(const GridFunction& u, ScalingWhich which,
                             const FractionalParams& params, int workers = 0);

/// Cluster query with the seminorm budget left open; the pipeline fills it in.
struct CorollaryQuery {
    double c;
    double alpha;
    double delta;
    double lambda;
};

struct CorollaryResult {
    ClusterCertificate certificate;
    ReductionKind kind;
    double gamma_prime = 0.0;           ///< given budget multiplier
    double gamma_prime_measured = 0.0;  ///< seminorm / (c * r^e) for the input kind
    bool budget_passed = false;         ///< gradient/BV hypothesis outcome
    double embedding_C = 0.0;
    double gamma = 0.0;                 ///< embedding_C * gamma_prime
};

/// Checks the gradient (w1p) or total-variation (bv) budget, converts it to a
/// fractional budget via the embedding constant, and delegates to
/// cluster_search with the completed query.
CorollaryResult corollary_pipeline(const GridFunction& u,
                                   const CorollaryQuery& query,
                                   const ReductionInput& input,
                                   EmbeddingMethod method = EmbeddingMethod::quadrature,
                                   int workers = 0);

}  // namespace clustercert
