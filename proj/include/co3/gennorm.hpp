#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace co3 {

class Rng;

/// Generalized normal distribution with location mu, scale alpha and shape
/// beta. Laplace at beta = 1, normal at beta = 2.
struct GenNormParams {
    double mu = 0.0;
    double alpha = 1.0;
    double beta = 2.0;

    void validate() const;

    double variance() const;
    double stddev() const;
    double kurtosis() const;
};

/// Kurtosis Gamma(5/b)Gamma(1/b)/Gamma(3/b)^2 as a function of the shape;
/// strictly decreasing on the working interval [0.2, 5].
double gennorm_kurtosis_of_shape(double beta);

/// Inverse of gennorm_kurtosis_of_shape by bisection on [0.2, 5]; kurtosis
/// values outside the attainable range clamp to the nearest endpoint.
double gennorm_shape_from_kurtosis(double kurtosis);

double gennorm_pdf(double x, const GenNormParams& p);

/// F(x) = 1/2 + sign(x - mu)/2 * P(1/beta, (|x - mu|/alpha)^beta).
double gennorm_cdf(double x, const GenNormParams& p);

/// Inverse CDF, solved on the monotone CDF to |F(x) - q| <= 1e-12.
double gennorm_quantile(double q, const GenNormParams& p);

/// n i.i.d. draws: |X - mu| = alpha * G^{1/beta} with G ~ Gamma(1/beta),
/// sign uniform. Deterministic given the seed.
Eigen::ArrayXd gennorm_sample(const GenNormParams& p, Eigen::Index n, std::uint64_t seed);
double gennorm_sample_one(const GenNormParams& p, Rng& rng);

/// Moment fit: mu from the mean, beta from kurtosis matching, alpha from the
/// variance. Throws on fewer than 100 samples or zero variance.
GenNormParams fit_gennorm(const Eigen::Ref<const Eigen::ArrayXd>& samples);

}  // namespace co3
