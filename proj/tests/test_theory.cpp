#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "co3/theory.hpp"

using namespace co3;

namespace {

TaskSpec conv_spec() {
    TaskSpec spec;
    spec.kind = TaskKind::Quadratic;
    spec.dimension = 2;
    spec.users = 4;
    spec.data_seed = 11;
    spec.eig_min = 1.0;
    spec.eig_max = 2.0;
    spec.init_distance = 1.0;
    spec.noise_scale = 0.5;
    spec.noise_shape = 1.5;
    return spec;
}

}  // namespace

TEST_CASE("quantization error bound values") {
    CHECK(quantization_error_bound(1) == doctest::Approx(4.3).epsilon(1e-15));
    CHECK(quantization_error_bound(2) == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(quantization_error_bound(0) == doctest::Approx(16.3).epsilon(1e-15));
    CHECK_THROWS_AS(quantization_error_bound(-1), std::invalid_argument);
}

TEST_CASE("convergence bound arithmetic and monotonicity") {
    TheoryParams p;
    p.smoothness = 1.0;
    p.strong_convexity = 1.0;
    p.grad_bound = 1.0;
    p.rounds = 100;
    p.mant_bits = 2;
    CHECK(convergence_bound(p, 1.0) == doctest::Approx(0.239).epsilon(1e-12));

    // Vanishes as T grows; decreasing in T along a grid.
    double prev = convergence_bound(p, 1.0);
    for (int t : {200, 400, 1000, 10000, 1000000}) {
        TheoryParams q = p;
        q.rounds = t;
        const double v = convergence_bound(q, 1.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-2);

    // Increasing in G, L, mu and in the quantization term via fewer mantissa bits.
    TheoryParams g = p;
    g.grad_bound = 2.0;
    CHECK(convergence_bound(g, 1.0) > convergence_bound(p, 1.0));
    TheoryParams l = p;
    l.smoothness = 3.0;
    CHECK(convergence_bound(l, 1.0) > convergence_bound(p, 1.0));
    TheoryParams m = p;
    m.strong_convexity = 0.5;
    CHECK(convergence_bound(m, 1.0) < convergence_bound(p, 1.0));
    TheoryParams mm = p;
    mm.mant_bits = 1;
    CHECK(convergence_bound(mm, 1.0) > convergence_bound(p, 1.0));
    // Only the third term moves with the mantissa width.
    const double diff = convergence_bound(mm, 1.0) - convergence_bound(p, 1.0);
    CHECK(diff == doctest::Approx((quantization_error_bound(1) - quantization_error_bound(2)) * 3.0 / 100.0));
}

TEST_CASE("assumption checks on the quadratic") {
    // Identity Hessian: both curvature constants are one.
    TaskSpec ident = conv_spec();
    ident.eig_min = ident.eig_max = 1.0;
    const auto unit_task = make_task(ident);
    CHECK(unit_task->smoothness() == doctest::Approx(1.0));
    CHECK(unit_task->strong_convexity() == doctest::Approx(1.0));

    TaskSpec spec = conv_spec();
    spec.eig_min = 1.0;
    spec.eig_max = 4.0;
    spec.grad_bound = 100.0;
    const auto task = make_task(spec);
    std::vector<Eigen::VectorXd> trajectory{task->initial_model(), task->optimum()};
    const AssumptionReport rep = check_assumptions(*task, trajectory);
    CHECK(rep.smoothness == doctest::Approx(4.0));
    CHECK(rep.strong_convexity == doctest::Approx(1.0));
    CHECK(rep.violations == 0);
    CHECK(rep.ok);

    // A far-away point violates a tight gradient bound.
    TaskSpec tight = spec;
    tight.grad_bound = 0.5;
    const auto task2 = make_task(tight);
    std::vector<Eigen::VectorXd> bad{task2->initial_model() * 50.0};
    const AssumptionReport rep2 = check_assumptions(*task2, bad);
    CHECK(rep2.violations == 1);
    CHECK_FALSE(rep2.ok);
}

TEST_CASE("quantization error verification on a reduced budget") {
    const auto rows = verify_quantization_error(FpFormat::fp4(), {1.0, 1.5, 2.0}, 100000, 303);
    for (const auto& row : rows) {
        CHECK(row.moment <= row.bound);
        CHECK(row.tail_moment <= 0.15);
        CHECK(row.ok);
    }
    const auto rows8 = verify_quantization_error(FpFormat::fp8(), {1.0, 2.0}, 100000, 304);
    for (const auto& row : rows8) CHECK(row.moment <= quantization_error_bound(2));
}

TEST_CASE("convergence bound holds on a reduced budget") {
    const BoundReport rep = verify_convergence(conv_spec(), FpFormat::fp4(), 100, 8, 404);
    CHECK(rep.eta == doctest::Approx(0.1));
    CHECK(rep.empirical_gap >= 0.0);
    CHECK(rep.satisfied);
    CHECK(rep.empirical_gap <= rep.bound_value);
    // Zero-noise special case also sits under the bound.
    TaskSpec quiet = conv_spec();
    quiet.noise_scale = 0.0;
    const BoundReport rep2 = verify_convergence(quiet, FpFormat::fp4(), 100, 4, 405);
    CHECK(rep2.satisfied);
    CHECK(rep2.empirical_gap <= rep.bound_value);
}
