#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "co3/feedback.hpp"
#include "co3/fp_grid.hpp"
#include "co3/rng.hpp"

using namespace co3;

namespace {

Eigen::VectorXd scalar(double v) {
    Eigen::VectorXd x(1);
    x[0] = v;
    return x;
}

}  // namespace

TEST_CASE("preprocess adds the decayed memory") {
    FeedbackState fb(1, 0.7);
    CHECK(preprocess(fb, scalar(1.2))[0] == doctest::Approx(1.2));  // zero memory
    fb.memory[0] = 0.5;
    CHECK(preprocess(fb, scalar(1.2))[0] == doctest::Approx(1.55));
    fb.gamma = 0.0;
    CHECK(preprocess(fb, scalar(1.2))[0] == doctest::Approx(1.2));
    CHECK(fb.memory[0] == 0.5);  // preprocess leaves the state alone
    CHECK_THROWS_AS(preprocess(fb, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("scalar trace against the fp4 grid") {
    FeedbackState fb(1, 0.7);
    fb.memory[0] = 0.5;
    const Eigen::VectorXd g = scalar(1.2);
    const Eigen::VectorXd v = preprocess(fb, g);
    CHECK(v[0] == doctest::Approx(1.55));
    const Eigen::ArrayXd levels = grid_levels(FpFormat::fp4());
    const double ghat = levels[quantize_value(v[0], levels)];
    CHECK(ghat == doctest::Approx(1.5));
    update(fb, g, scalar(ghat));
    CHECK(fb.memory[0] == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("perfect quantization drains undecayed memory") {
    FeedbackState fb(4, 1.0);
    Rng rng(5);
    for (int i = 0; i < 4; ++i) fb.memory[i] = rng.normal();
    Eigen::VectorXd g(4);
    for (int i = 0; i < 4; ++i) g[i] = rng.normal();
    const Eigen::VectorXd v = preprocess(fb, g);
    update(fb, g, v);  // quantizer returns v exactly
    CHECK(fb.memory.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("memoryless residual at gamma zero") {
    FeedbackState fb(2, 0.0);
    fb.memory << 5.0, -5.0;
    Eigen::VectorXd g(2);
    g << 1.0, 2.0;
    Eigen::VectorXd ghat(2);
    ghat << 0.75, 2.5;
    update(fb, g, ghat);
    CHECK(fb.memory[0] == doctest::Approx(0.25));
    CHECK(fb.memory[1] == doctest::Approx(-0.5));
}

TEST_CASE("memory norm is the L1 norm") {
    FeedbackState fb(2, 0.7);
    CHECK(memory_norm(fb) == 0.0);
    fb.memory << 0.5, -0.5;
    CHECK(memory_norm(fb) == doctest::Approx(1.0));
}

TEST_CASE("decayed memory stays within the geometric bound") {
    // Per-step residuals g - ghat bounded by e_max accumulate as a geometric
    // series under the decay.
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const double gamma = 0.95 * rng.uniform();
        const double e_max = 0.5 + rng.uniform();
        FeedbackState fb(3, gamma);
        for (int t = 0; t < 400; ++t) {
            Eigen::VectorXd g(3), ghat(3);
            for (int i = 0; i < 3; ++i) {
                g[i] = 3.0 * rng.normal();
                ghat[i] = g[i] - e_max * (2.0 * rng.uniform() - 1.0);
            }
            update(fb, g, ghat);
            CHECK(fb.memory.lpNorm<Eigen::Infinity>() <= e_max / (1.0 - gamma) + 1e-9);
        }
    }
}

TEST_CASE("preprocess is linear in the gradient") {
    FeedbackState fb(3, 0.6);
    Rng rng(8);
    for (int i = 0; i < 3; ++i) fb.memory[i] = rng.normal();
    Eigen::VectorXd g1(3), g2(3);
    for (int i = 0; i < 3; ++i) {
        g1[i] = rng.normal();
        g2[i] = rng.normal();
    }
    const Eigen::VectorXd lhs = preprocess(fb, g1 + g2);
    const Eigen::VectorXd rhs = preprocess(fb, g1) + g2;
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("virtual sequence identity on a scalar trace") {
    // With gamma = 1, eta * m_t equals the gap between the actual iterate and
    // the unquantized shadow iterate: w_hat - w_tilde = eta * m_t, since the
    // memory accumulates g - ghat while the iterates accumulate the negated
    // steps.
    const double eta = 0.1;
    FeedbackState fb(1, 1.0);
    const Eigen::ArrayXd levels = grid_levels(FpFormat::fp4());
    double w_hat = 0.0, w_tilde = 0.0;
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd g = scalar(2.5 * rng.normal());
        const Eigen::VectorXd v = preprocess(fb, g);
        const double ghat = levels[quantize_value(v[0], levels)];
        update(fb, g, scalar(ghat));
        w_hat -= eta * ghat;
        w_tilde -= eta * g[0];
        CHECK(w_hat - w_tilde == doctest::Approx(eta * fb.memory[0]).epsilon(1e-9));
    }
}
