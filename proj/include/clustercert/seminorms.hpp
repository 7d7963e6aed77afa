#pragma once

#include <cstdint>
#include <vector>

#include "clustercert/geometry.hpp"

namespace clustercert {

/// Fractional smoothness parameters: order s in (0,1), exponent p >= 1.
struct FractionalParams {
    double s;
    double p;

    FractionalParams(double s, double p);

    /// Exponent of the pair kernel |x-y|^-(N + p s).
    double kernel_exponent(int dim) const { return dim + p * s; }
};

/// Reference double-sum at cell midpoints:
///
///   [ sum_{i != j} |u_i - u_j|^p / |x_i - x_j|^(N+ps) * h^(2N) ]^(1/p)
///
/// Plain ordered double loop, diagonal excluded. Quadratic cost; this is the
/// oracle the optimized path is checked against, keep it dumb.
double gagliardo_naive(const GridFunction& u, const FractionalParams& params);

/// Same quantity via symmetric-pair enumeration (each unordered pair once,
/// doubled) with a kernel table over index offsets and fixed-size chunked
/// partial sums. The chunk grid and reduction order depend only on the input,
/// so results are bitwise reproducible for every worker count. Agrees with
/// gagliardo_naive within 1e-12 relative.
double gagliardo(const GridFunction& u, const FractionalParams& params,
                 int workers = 0);

/// gagliardo(restrict_to_subcube(u, k, j)) for every j of the depth-k
/// partition, in lexicographic j order, computed by index arithmetic over the
/// parent array. Requires k | m.
std::vector<double> gagliardo_subcube_batch(const GridFunction& u,
                                            const FractionalParams& params,
                                            int k, int workers = 0);

/// Forward-difference gradient L^p norm: per cell, the vector of forward
/// differences (u_{i+e_a} - u_i)/h over the axes whose successor exists,
/// Euclidean norm, raised to p, weighted by h^N. Requires m >= 2.
double grad_lp(const GridFunction& u, double p);

/// Anisotropic discrete total variation:
/// sum over axes a and cells with an a-successor of |u_{i+e_a} - u_i| * h^(N-1).
/// Requires m >= 2.
double bv_seminorm(const GridFunction& u);

enum class EmbeddingMethod { quadrature, ball_bound, monte_carlo };

/// C(N,s,p) = ( integral over Q_2 of |z|^-sigma dz )^(1/p), sigma = N+ps-p.
/// sigma < N always, so the integral is finite.
struct EmbeddingConstant {
    int dim;
    FractionalParams params;
    double sigma;
    double integral;  ///< the Q_2 integral itself
    double value;     ///< integral^(1/p)
    EmbeddingMethod method;
    double std_error;      ///< standard error of `integral`; 0 for deterministic methods
    std::uint64_t samples; ///< monte-carlo sample count; 0 otherwise
};

inline constexpr std::uint64_t kDefaultMonteCarloSeed = 20240817;
inline constexpr std::uint64_t kDefaultMonteCarloSamples = 1000000;

/// quadrature: annular cube-shell decomposition about the origin, one shell
/// integrated by midpoint rule with Richardson refinement until successive
/// estimates agree to 1e-6 relative, summed by exact self-similarity.
/// ball_bound: closed form [N omega_N sqrt(N)^(N-sigma) / (N-sigma)]^(1/p),
/// an upper bound since Q_2 is contained in the radius-sqrt(N) ball.
/// monte_carlo: uniform sampling on Q_2 with reported standard error;
/// provided as an independent oracle only.
EmbeddingConstant embedding_constant(
    int dim, const FractionalParams& params,
    EmbeddingMethod method = EmbeddingMethod::quadrature,
    std::uint64_t mc_seed = kDefaultMonteCarloSeed,
    std::uint64_t mc_samples = kDefaultMonteCarloSamples);

}  // namespace clustercert
