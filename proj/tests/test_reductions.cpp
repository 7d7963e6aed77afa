#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "clustercert/corpus.hpp"
#include "clustercert/geometry.hpp"
#include "clustercert/reductions.hpp"
#include "clustercert/seminorms.hpp"

using namespace clustercert;

namespace {

GridSpec unit_grid(int dim, int m) {
    return GridSpec(Cube(dim, std::vector<double>(dim, 0.0), 1.0), m);
}

}  // namespace

TEST_CASE("reduction input validation") {
    CHECK_THROWS_AS(ReductionInput::w1p(0.0, FractionalParams(0.5, 2.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ReductionInput::bv(-1.0, 0.5), std::invalid_argument);
    const ReductionInput bv = ReductionInput::bv(2.0, 0.25);
    CHECK(bv.params.p == 1.0);  // BV route always reduces with p = 1
    CHECK(bv.params.s == 0.25);
}

TEST_CASE("budget reduction multiplies by the embedding constant") {
    const FractionalParams prm(0.5, 2.0);
    const double C = embedding_constant(2, prm).value;
    CHECK(reduce_to_fractional(ReductionInput::w1p(1.0, prm), 2) == C);
    CHECK(reduce_to_fractional(ReductionInput::w1p(2.0, prm), 2) == 2.0 * C);

    const double Cbv = embedding_constant(2, FractionalParams(0.5, 1.0)).value;
    CHECK(reduce_to_fractional(ReductionInput::bv(1.0, 0.5), 2) == Cbv);

    const double Cball =
        embedding_constant(2, prm, EmbeddingMethod::ball_bound).value;
    CHECK(reduce_to_fractional(ReductionInput::w1p(1.0, prm), 2,
                               EmbeddingMethod::ball_bound) == Cball);

    CHECK_THROWS_AS(reduce_to_fractional(ReductionInput::w1p(1.0, prm), 1),
                    std::invalid_argument);
}

TEST_CASE("scaling identities on sampled data") {
    const std::vector<double> center{0.2, 0.2};
    for (double r : {0.5, 2.0, 3.0}) {
        const GridSpec spec(Cube(2, center, r), 16);
        const GridFunction bump =
            sample(FunctionSpec(BumpFn{{0.2, 0.1}, 0.5, 1.0}), spec);
        const GridFunction trig =
            sample(FunctionSpec(RandomTrigFn{21, 3, 1.0}), spec);
        for (const GridFunction* u : {&bump, &trig}) {
            for (double s : {0.25, 0.75})
                for (double p : {1.0, 2.0}) {
                    const ScalingReport rep = verify_scaling(
                        *u, ScalingWhich::gagliardo, FractionalParams(s, p));
                    CHECK(rep.rel_error <= 1e-12);
                    CHECK(rep.r == r);
                    CHECK(rep.exponent == doctest::Approx((2.0 - p * s) / p));
                }
            CHECK(verify_scaling(*u, ScalingWhich::grad,
                                 FractionalParams(0.5, 2.0))
                      .rel_error <= 1e-12);
            CHECK(verify_scaling(*u, ScalingWhich::bv,
                                 FractionalParams(0.5, 1.0))
                      .rel_error <= 1e-12);
        }
    }
}

TEST_CASE("bv scaling on a halfspace jump hits the closed form") {
    // Unit jump across axis 0 on Q_3: total variation 3 = 3^{N-1} times the
    // unit-cube value.
    const GridSpec spec(Cube(2, {0.2, 0.2}, 3.0), 12);
    const GridFunction u =
        sample(FunctionSpec(IndicatorHalfspaceFn{0, 0.0, 0.0, 1.0}), spec);
    const ScalingReport rep =
        verify_scaling(u, ScalingWhich::bv, FractionalParams(0.5, 1.0));
    CHECK(rep.lhs == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(rep.rhs == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(rep.rel_error <= 1e-12);
}

TEST_CASE("grad scaling on a linear function") {
    const GridSpec spec(Cube(2, {0.0, 0.0}, 2.0), 10);
    const GridFunction u =
        sample(FunctionSpec(LinearFn{{1.0, 0.0}}), spec);
    const ScalingReport rep =
        verify_scaling(u, ScalingWhich::grad, FractionalParams(0.5, 2.0));
    // N = p = 2: the exponent vanishes and both sides carry (m-1)/m.
    CHECK(rep.exponent == 0.0);
    CHECK(rep.lhs == doctest::Approx(2.0 * std::sqrt(0.9)).epsilon(1e-13));
    CHECK(rep.rel_error <= 1e-12);
}

TEST_CASE("corollary pipeline on a constant certifies trivially") {
    const GridFunction u =
        sample(FunctionSpec(ConstantFn{2.0}), unit_grid(2, 8));
    const CorollaryQuery q{1.0, 0.5, 0.5, 0.5};
    for (const ReductionInput& input :
         {ReductionInput::w1p(1.0, FractionalParams(0.5, 2.0)),
          ReductionInput::bv(1.0, 0.5)}) {
        const CorollaryResult res = corollary_pipeline(u, q, input);
        CHECK(res.certificate.found);
        CHECK(res.certificate.k == 2);
        CHECK(res.certificate.fraction == 1.0);
        CHECK(res.gamma_prime_measured == 0.0);
        CHECK(res.budget_passed);
        CHECK(res.gamma == res.embedding_C);  // gamma_prime = 1
    }
}

TEST_CASE("bv corollary equals the direct search with the reduced budget") {
    const GridFunction u = sample(
        FunctionSpec(IndicatorHalfspaceFn{0, 0.0, 0.0, 2.0}), unit_grid(2, 12));
    const CorollaryQuery q{1.0, 0.4, 0.5, 0.5};
    const ReductionInput input = ReductionInput::bv(1.0, 0.5);
    const CorollaryResult res = corollary_pipeline(u, q, input);

    const double gamma = embedding_constant(2, FractionalParams(0.5, 1.0)).value;
    const ClusterQuery direct(1.0, 0.4, gamma, 0.5, 0.5,
                              FractionalParams(0.5, 1.0));
    const ClusterCertificate cert = cluster_search(u, direct);

    CHECK(res.gamma == gamma);
    CHECK(res.certificate.found == cert.found);
    CHECK(res.certificate.k == cert.k);
    CHECK(res.certificate.witness_index == cert.witness_index);
    CHECK(res.certificate.fraction == cert.fraction);
    CHECK(res.certificate.gamma_measured == cert.gamma_measured);

    // The measured BV budget: jump height 2 over one unit crossing.
    CHECK(res.gamma_prime_measured == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(res.budget_passed == false);
}

TEST_CASE("w1p corollary replays the direct search") {
    const GridFunction u =
        sample(FunctionSpec(BumpFn{{0.05, -0.1}, 0.25, 1.0}), unit_grid(2, 48));
    const FractionalParams prm(0.5, 2.0);
    const double c = 0.5;
    // Feed the measured gradient budget back in, so the reduced gamma equals
    // C times that measurement and the two searches see identical queries.
    const double measured = grad_lp(u, prm.p) / c;  // r = 1, exponent 0
    const CorollaryQuery q{c, 0.3, 0.5, 0.5};
    const CorollaryResult res =
        corollary_pipeline(u, q, ReductionInput::w1p(measured, prm));
    CHECK(res.gamma_prime_measured == doctest::Approx(measured).epsilon(1e-14));
    CHECK(res.budget_passed);

    const ClusterQuery direct(c, 0.3, res.gamma, 0.5, 0.5, prm);
    const ClusterCertificate cert = cluster_search(u, direct);
    CHECK(res.certificate.found == cert.found);
    CHECK(res.certificate.k == cert.k);
    CHECK(res.certificate.witness_index == cert.witness_index);
    CHECK(res.certificate.fraction == cert.fraction);
}
