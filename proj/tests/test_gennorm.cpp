#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "co3/gennorm.hpp"
#include "co3/rng.hpp"
#include "co3/special_functions.hpp"

using namespace co3;

namespace {

// Quadrature of the pdf, independent of the cdf path. Substituting
// x = mu + alpha u^2 removes the cusp at the location for shapes below one
// and pulls the heavy tails in, so plain Simpson converges; the window covers
// everything outside a e^-30 tail.
double pdf_mass(const GenNormParams& p, int n = 200000) {
    const double u_max = std::pow(30.0, 0.5 / p.beta) + 2.0;
    const double h = u_max / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double u = i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * gennorm_pdf(p.mu + p.alpha * u * u, p) * 2.0 * p.alpha * u;
    }
    return 2.0 * acc * h / 3.0;  // both half-lines by symmetry
}

}  // namespace

TEST_CASE("pdf closed-form anchor points") {
    // beta=2 at the mode: 1/sqrt(pi).
    CHECK(gennorm_pdf(0.0, {0.0, 1.0, 2.0}) == doctest::Approx(0.5641895835477563).epsilon(1e-12));
    // beta=1 (Laplace, Gamma(1)=1): 0.5 at the mode.
    CHECK(gennorm_pdf(0.0, {0.0, 1.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-12));
    // Direct formula evaluation, frozen from an independent high-precision
    // calculation: 1.5/(2*Gamma(2/3)) * exp(-1).
    CHECK(gennorm_pdf(1.0, {0.0, 1.0, 1.5}) ==
          doctest::Approx(0.20375594536134428).epsilon(1e-12));
}

TEST_CASE("pdf matches Laplace and normal special cases") {
    const GenNormParams laplace{0.3, 0.8, 1.0};
    const GenNormParams normal{-0.2, 1.3, 2.0};
    for (double x : {-2.0, -0.5, 0.0, 0.4, 1.7}) {
        const double lap = std::exp(-std::fabs(x - 0.3) / 0.8) / (2.0 * 0.8);
        CHECK(gennorm_pdf(x, laplace) == doctest::Approx(lap).epsilon(1e-10));
        const double sigma = 1.3 / std::sqrt(2.0);
        const double nrm = std::exp(-0.5 * std::pow((x + 0.2) / sigma, 2)) /
                           (sigma * std::sqrt(2.0 * 3.141592653589793));
        CHECK(gennorm_pdf(x, normal) == doctest::Approx(nrm).epsilon(1e-10));
    }
}

TEST_CASE("pdf integrates to one") {
    for (double beta : {0.5, 1.0, 1.5, 2.0, 3.0})
        CHECK(pdf_mass({0.0, 1.0, beta}) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("pdf rejects invalid parameters") {
    CHECK_THROWS_AS(gennorm_pdf(0.0, {0.0, -1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(gennorm_pdf(0.0, {0.0, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("cdf anchor values and monotonicity") {
    const GenNormParams p{0.0, 1.0, 2.0};
    CHECK(gennorm_cdf(0.0, p) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gennorm_cdf(40.0, p) == doctest::Approx(1.0).epsilon(1e-12));
    // beta=2 reduces to a normal with variance 1/2.
    CHECK(gennorm_cdf(0.5, p) == doctest::Approx(0.7602499389065233).epsilon(1e-10));

    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const GenNormParams q{rng.normal(), 0.1 + 3.0 * rng.uniform(), 0.3 + 3.0 * rng.uniform()};
        double x1 = q.mu + 8.0 * q.alpha * (rng.uniform() - 0.5);
        double x2 = q.mu + 8.0 * q.alpha * (rng.uniform() - 0.5);
        if (x1 > x2) std::swap(x1, x2);
        CHECK(gennorm_cdf(x1, q) <= gennorm_cdf(x2, q) + 1e-15);
    }
}

TEST_CASE("cdf agrees with Laplace and normal closed forms") {
    for (double x : {-2.0, -0.3, 0.0, 0.9, 2.5}) {
        const double lap = x < 0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
        CHECK(gennorm_cdf(x, {0.0, 1.0, 1.0}) == doctest::Approx(lap).epsilon(1e-10));
        const double nrm = 0.5 * (1.0 + std::erf(x));  // variance 1/2
        CHECK(gennorm_cdf(x, {0.0, 1.0, 2.0}) == doctest::Approx(nrm).epsilon(1e-10));
    }
}

TEST_CASE("quantile inverts the cdf") {
    CHECK(gennorm_quantile(0.5, {1.7, 2.0, 1.3}) == doctest::Approx(1.7));
    // Laplace three-quarter point: ln 2.
    CHECK(gennorm_quantile(0.75, {0.0, 1.0, 1.0}) ==
          doctest::Approx(0.6931471805599453).epsilon(1e-10));
    CHECK_THROWS_AS(gennorm_quantile(0.0, {0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(gennorm_quantile(1.0, {0.0, 1.0, 1.0}), std::invalid_argument);

    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const GenNormParams p{rng.normal(), 0.2 + rng.uniform(), 0.4 + 2.5 * rng.uniform()};
        const double q = 0.001 + 0.998 * rng.uniform();
        CHECK(gennorm_cdf(gennorm_quantile(q, p), p) == doctest::Approx(q).epsilon(1e-9));
    }
}

TEST_CASE("sampling moments and determinism") {
    const auto normal = gennorm_sample({0.0, 1.0, 2.0}, 1000000, 42);
    const double var = (normal - normal.mean()).square().mean();
    CHECK(var == doctest::Approx(0.5).epsilon(0.02));

    const auto laplace = gennorm_sample({0.0, 1.0, 1.0}, 1000000, 43);
    const double m2 = (laplace - laplace.mean()).square().mean();
    const double m4 = (laplace - laplace.mean()).square().square().mean();
    CHECK(m4 / (m2 * m2) == doctest::Approx(6.0).epsilon(0.04));

    const auto a = gennorm_sample({0.5, 2.0, 1.2}, 1000, 7);
    const auto b = gennorm_sample({0.5, 2.0, 1.2}, 1000, 7);
    CHECK((a == b).all());
}

TEST_CASE("kurtosis is strictly decreasing on the working interval") {
    double prev = gennorm_kurtosis_of_shape(0.2);
    for (double beta = 0.21; beta <= 5.0001; beta += 0.01) {
        const double k = gennorm_kurtosis_of_shape(beta);
        CHECK(k < prev);
        prev = k;
    }
    CHECK(gennorm_kurtosis_of_shape(1.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(gennorm_kurtosis_of_shape(2.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("fit recovers generating shape") {
    for (double beta : {1.0, 1.2, 1.5, 2.0}) {
        const auto samples =
            gennorm_sample({0.0, 1.0, beta}, 100000, 1000 + static_cast<int>(beta * 10));
        const GenNormParams fit = fit_gennorm(samples);
        CHECK(std::fabs(fit.beta - beta) <= 0.1);
        CHECK(fit.mu == doctest::Approx(0.0).epsilon(0.05));
        CHECK(fit.alpha == doctest::Approx(1.0).epsilon(0.1));
    }
    // Kurtosis-range clamping: nearly-uniform data has kurtosis below the
    // attainable minimum, so the shape clamps to the upper endpoint.
    Eigen::ArrayXd uniformish(1000);
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) uniformish[i] = rng.uniform();
    CHECK(fit_gennorm(uniformish).beta == doctest::Approx(5.0));
}

TEST_CASE("fit error paths") {
    CHECK_THROWS_AS(fit_gennorm(Eigen::ArrayXd::Zero(50)), std::invalid_argument);
    CHECK_THROWS_AS(fit_gennorm(Eigen::ArrayXd::Constant(500, 3.0)), std::invalid_argument);
}

TEST_CASE("regularized incomplete gamma sanity") {
    // P(1, x) = 1 - exp(-x).
    for (double x : {0.1, 0.5, 1.0, 3.0, 10.0})
        CHECK(regularized_gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    // P(1/2, x) = erf(sqrt(x)).
    for (double x : {0.2, 1.0, 4.0})
        CHECK(regularized_gamma_p(0.5, x) ==
              doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
    CHECK(regularized_gamma_p(2.5, 0.0) == 0.0);
    CHECK(regularized_gamma_q(2.5, 0.0) == 1.0);
}
