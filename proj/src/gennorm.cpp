#include "co3/gennorm.hpp"

#include <cmath>
#include <stdexcept>

#include "co3/rng.hpp"
#include "co3/special_functions.hpp"

namespace co3 {

void GenNormParams::validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(mu) || !std::isfinite(alpha) ||
        !std::isfinite(beta))
        throw std::invalid_argument("GenNormParams: requires alpha > 0, beta > 0, finite mu");
}

double GenNormParams::variance() const {
    validate();
    return alpha * alpha *
           std::exp(std::lgamma(3.0 / beta) - std::lgamma(1.0 / beta));
}

double GenNormParams::stddev() const { return std::sqrt(variance()); }

double GenNormParams::kurtosis() const {
    validate();
    return gennorm_kurtosis_of_shape(beta);
}

double gennorm_kurtosis_of_shape(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("gennorm_kurtosis_of_shape: beta > 0");
    return std::exp(std::lgamma(5.0 / beta) + std::lgamma(1.0 / beta) -
                    2.0 * std::lgamma(3.0 / beta));
}

double gennorm_shape_from_kurtosis(double kurtosis) {
    constexpr double kLo = 0.2;
    constexpr double kHi = 5.0;
    // Kurtosis is strictly decreasing on [kLo, kHi]; clamp outside the range.
    if (kurtosis >= gennorm_kurtosis_of_shape(kLo)) return kLo;
    if (kurtosis <= gennorm_kurtosis_of_shape(kHi)) return kHi;
    double lo = kLo, hi = kHi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (gennorm_kurtosis_of_shape(mid) > kurtosis)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13) break;
    }
    return 0.5 * (lo + hi);
}

double gennorm_pdf(double x, const GenNormParams& p) {
    p.validate();
    const double z = std::fabs(x - p.mu) / p.alpha;
    const double log_norm =
        std::log(p.beta) - std::log(2.0 * p.alpha) - std::lgamma(1.0 / p.beta);
    return std::exp(log_norm - std::pow(z, p.beta));
}

double gennorm_cdf(double x, const GenNormParams& p) {
    p.validate();
    if (x == p.mu) return 0.5;
    const double z = std::pow(std::fabs(x - p.mu) / p.alpha, p.beta);
    const double half_tail = 0.5 * regularized_gamma_p(1.0 / p.beta, z);
    return x > p.mu ? 0.5 + half_tail : 0.5 - half_tail;
}

double gennorm_quantile(double q, const GenNormParams& p) {
    p.validate();
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("gennorm_quantile: q must lie in (0, 1)");
    if (q == 0.5) return p.mu;
    // Solve on the folded scale: |x - mu|/alpha = t^{1/beta} with
    // P(1/beta, t) = |2q - 1|, by bisection on t (monotone).
    const double target = std::fabs(2.0 * q - 1.0);
    double lo = 0.0, hi = 1.0;
    while (regularized_gamma_p(1.0 / p.beta, hi) < target) {
        hi *= 2.0;
        if (hi > 1e300) break;
    }
    for (int i = 0; i < 500; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (regularized_gamma_p(1.0 / p.beta, mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * hi + 1e-300) break;
    }
    const double dev = p.alpha * std::pow(0.5 * (lo + hi), 1.0 / p.beta);
    return q > 0.5 ? p.mu + dev : p.mu - dev;
}

double gennorm_sample_one(const GenNormParams& p, Rng& rng) {
    const double g = rng.gamma(1.0 / p.beta);
    return p.mu + rng.sign() * p.alpha * std::pow(g, 1.0 / p.beta);
}

Eigen::ArrayXd gennorm_sample(const GenNormParams& p, Eigen::Index n, std::uint64_t seed) {
    p.validate();
    if (n < 1) throw std::invalid_argument("gennorm_sample: n must be >= 1");
    Rng rng(seed);
    Eigen::ArrayXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = gennorm_sample_one(p, rng);
    return out;
}

GenNormParams fit_gennorm(const Eigen::Ref<const Eigen::ArrayXd>& samples) {
    const Eigen::Index n = samples.size();
    if (n < 100) throw std::invalid_argument("fit_gennorm: needs at least 100 samples");
    const double mean = samples.mean();
    const Eigen::ArrayXd centered = samples - mean;
    const double m2 = centered.square().mean();
    if (!(m2 > 0.0)) throw std::invalid_argument("fit_gennorm: degenerate sample (zero variance)");
    const double m4 = centered.square().square().mean();
    const double kurt = m4 / (m2 * m2);
    GenNormParams p;
    p.mu = mean;
    p.beta = gennorm_shape_from_kurtosis(kurt);
    p.alpha = std::sqrt(m2 * std::exp(std::lgamma(1.0 / p.beta) - std::lgamma(3.0 / p.beta)));
    return p;
}

}  // namespace co3
