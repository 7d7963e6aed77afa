#include "clustercert/reductions.hpp"

#include <cmath>
#include <stdexcept>

namespace clustercert {

ReductionInput::ReductionInput(ReductionKind k, double gp, FractionalParams pr)
    : kind(k), gamma_prime(gp), params(pr) {
    if (!(std::isfinite(gamma_prime) && gamma_prime > 0.0))
        throw std::invalid_argument("ReductionInput: budget multiplier must be positive");
}

ReductionInput ReductionInput::w1p(double gamma_prime, FractionalParams params) {
    return ReductionInput(ReductionKind::w1p, gamma_prime, params);
}

ReductionInput ReductionInput::bv(double gamma_prime, double s) {
    return ReductionInput(ReductionKind::bv, gamma_prime, FractionalParams(s, 1.0));
}

double reduce_to_fractional(const ReductionInput& input, int dim,
                            EmbeddingMethod method) {
    if (dim < 2)
        throw std::invalid_argument("reduce_to_fractional: requires dimension >= 2");
    return embedding_constant(dim, input.params, method).value * input.gamma_prime;
}

ScalingReport verify_scaling(const GridFunction& u, ScalingWhich which,
                             const FractionalParams& params, int workers) {
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const double r = spec.cube().side();

    // Same sample array, unit host: the comparison isolates the scaling factor.
    const GridFunction v(
        GridSpec(Cube(n, std::vector<double>(static_cast<std::size_t>(n), 0.0), 1.0),
                 spec.m()),
        u.values());

    ScalingReport report;
    report.which = which;
    report.r = r;
    switch (which) {
        case ScalingWhich::gagliardo:
            report.exponent = (n - params.p * params.s) / params.p;
            report.lhs = gagliardo(u, params, workers);
            report.rhs = std::pow(r, report.exponent) * gagliardo(v, params, workers);
            break;
        case ScalingWhich::grad:
            report.exponent = (n - params.p) / params.p;
            report.lhs = grad_lp(u, params.p);
            report.rhs = std::pow(r, report.exponent) * grad_lp(v, params.p);
            break;
        case ScalingWhich::bv:
            report.exponent = static_cast<double>(n - 1);
            report.lhs = bv_seminorm(u);
            report.rhs = std::pow(r, report.exponent) * bv_seminorm(v);
            break;
    }
    report.rel_error = std::fabs(report.lhs - report.rhs) /
                       std::max(report.lhs, 1e-300);
    return report;
}

CorollaryResult corollary_pipeline(const GridFunction& u, const CorollaryQuery& query,
                                   const ReductionInput& input,
                                   EmbeddingMethod method, int workers) {
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const double r = spec.cube().side();

    CorollaryResult result;
    result.kind = input.kind;
    result.gamma_prime = input.gamma_prime;

    double measured;
    double exponent;
    if (input.kind == ReductionKind::w1p) {
        measured = grad_lp(u, input.params.p);
        exponent = (n - input.params.p) / input.params.p;
    } else {
        measured = bv_seminorm(u);
        exponent = static_cast<double>(n - 1);
    }
    result.gamma_prime_measured = measured / (query.c * std::pow(r, exponent));
    result.budget_passed = result.gamma_prime_measured <= input.gamma_prime;

    result.embedding_C = embedding_constant(n, input.params, method).value;
    result.gamma = result.embedding_C * input.gamma_prime;

    const ClusterQuery full(query.c, query.alpha, result.gamma, query.delta,
                            query.lambda, input.params);
    result.certificate = cluster_search(u, full, workers);
    return result;
}

}  // namespace clustercert
