#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <variant>

#include "co3/gennorm.hpp"

namespace co3 {

struct SampleStats {
    Eigen::Index n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double kurtosis = 0.0;
    double excess_kurtosis = 0.0;
};

/// Standard moment estimators; throws on fewer than 4 samples or zero variance.
SampleStats sample_stats(const Eigen::Ref<const Eigen::ArrayXd>& samples);

enum class Family { Normal, Laplace, DoubleWeibull, GenNorm };

const char* family_name(Family f);

struct NormalParams {
    double mu = 0.0;
    double sigma = 1.0;
};

struct LaplaceParams {
    double mu = 0.0;
    double scale = 1.0;  // mean absolute deviation
};

struct DoubleWeibullParams {
    double mu = 0.0;
    double shape = 1.0;
    double scale = 1.0;
};

struct FamilyFit {
    Family family = Family::Normal;
    std::variant<NormalParams, LaplaceParams, DoubleWeibullParams, GenNormParams> params;
    double w2_distance = 0.0;

    /// Quantile function of the fitted distribution.
    double quantile(double q) const;
};

/// Order-2 Wasserstein distance between the empirical distribution of the
/// samples and the analytic distribution given by its quantile function:
/// ( (1/n) sum_i |x_(i) - F^{-1}((i - 0.5)/n)|^inner_order )^outer_exponent.
/// Defaults give the standard W2; inner_order = 1 reproduces the distance
/// with the absolute difference only.
double wasserstein_distance(const Eigen::Ref<const Eigen::ArrayXd>& samples,
                            const std::function<double(double)>& quantile,
                            double inner_order = 2.0, double outer_exponent = 0.5);

/// Fit one family by its standard estimator and attach the W2 distance.
FamilyFit fit_family(const Eigen::Ref<const Eigen::ArrayXd>& samples, Family family);

}  // namespace co3
