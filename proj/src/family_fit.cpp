#include "co3/family_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace co3 {

SampleStats sample_stats(const Eigen::Ref<const Eigen::ArrayXd>& samples) {
    const Eigen::Index n = samples.size();
    if (n < 4) throw std::invalid_argument("sample_stats: needs at least 4 samples");
    SampleStats s;
    s.n = n;
    s.mean = samples.mean();
    const Eigen::ArrayXd centered = samples - s.mean;
    const double m2 = centered.square().mean();
    if (!(m2 > 0.0)) throw std::invalid_argument("sample_stats: degenerate sample (zero variance)");
    const double m4 = centered.square().square().mean();
    s.variance = m2 * static_cast<double>(n) / static_cast<double>(n - 1);
    s.kurtosis = m4 / (m2 * m2);
    s.excess_kurtosis = s.kurtosis - 3.0;
    return s;
}

const char* family_name(Family f) {
    switch (f) {
        case Family::Normal: return "normal";
        case Family::Laplace: return "laplace";
        case Family::DoubleWeibull: return "dweibull";
        case Family::GenNorm: return "gennorm";
    }
    return "?";
}

namespace {

// Double Weibull: density (k / 2 lambda) (|x-mu|/lambda)^{k-1} exp(-(|x-mu|/lambda)^k).
// MLE on folded deviations y = |x - mu|, Newton on the shape.
DoubleWeibullParams fit_dweibull(const Eigen::Ref<const Eigen::ArrayXd>& samples) {
    DoubleWeibullParams p;
    p.mu = samples.mean();
    std::vector<double> y;
    y.reserve(samples.size());
    const double floor = 1e-12 * std::sqrt((samples - p.mu).square().mean());
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        const double v = std::fabs(samples[i] - p.mu);
        if (v > floor) y.push_back(v);
    }
    if (y.size() < 10)
        throw std::invalid_argument("fit_family: degenerate sample for double Weibull fit");
    const double n = static_cast<double>(y.size());
    double mean_log = 0.0;
    for (double v : y) mean_log += std::log(v);
    mean_log /= n;

    // Solve g(k) = sum(y^k log y)/sum(y^k) - 1/k - mean_log = 0.
    double k = 1.0;
    for (int it = 0; it < 100; ++it) {
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (double v : y) {
            const double w = std::pow(v, k);
            const double lg = std::log(v);
            s0 += w;
            s1 += w * lg;
            s2 += w * lg * lg;
        }
        const double g = s1 / s0 - 1.0 / k - mean_log;
        const double dg = (s2 * s0 - s1 * s1) / (s0 * s0) + 1.0 / (k * k);
        const double step = g / dg;
        k -= step;
        if (!(k > 1e-3)) k = 1e-3;
        if (k > 50.0) k = 50.0;
        if (std::fabs(step) < 1e-12 * k) break;
    }
    double sk = 0.0;
    for (double v : y) sk += std::pow(v, k);
    p.shape = k;
    p.scale = std::pow(sk / n, 1.0 / k);
    return p;
}

double dweibull_quantile(const DoubleWeibullParams& p, double q) {
    if (q == 0.5) return p.mu;
    const double tail = q > 0.5 ? 2.0 * (1.0 - q) : 2.0 * q;
    const double dev = p.scale * std::pow(-std::log(tail), 1.0 / p.shape);
    return q > 0.5 ? p.mu + dev : p.mu - dev;
}

}  // namespace

double FamilyFit::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("FamilyFit::quantile: q in (0,1)");
    switch (family) {
        case Family::Normal: {
            const auto& p = std::get<NormalParams>(params);
            // Normal(mu, sigma^2) is GenNorm(mu, sigma*sqrt(2), 2).
            return gennorm_quantile(q, {p.mu, p.sigma * std::sqrt(2.0), 2.0});
        }
        case Family::Laplace: {
            const auto& p = std::get<LaplaceParams>(params);
            return q < 0.5 ? p.mu + p.scale * std::log(2.0 * q)
                           : p.mu - p.scale * std::log(2.0 * (1.0 - q));
        }
        case Family::DoubleWeibull:
            return dweibull_quantile(std::get<DoubleWeibullParams>(params), q);
        case Family::GenNorm:
            return gennorm_quantile(q, std::get<GenNormParams>(params));
    }
    throw std::logic_error("FamilyFit::quantile: unknown family");
}

double wasserstein_distance(const Eigen::Ref<const Eigen::ArrayXd>& samples,
                            const std::function<double(double)>& quantile,
                            double inner_order, double outer_exponent) {
    const Eigen::Index n = samples.size();
    if (n < 2) throw std::invalid_argument("wasserstein_distance: needs at least 2 samples");
    std::vector<double> sorted(samples.data(), samples.data() + n);
    std::sort(sorted.begin(), sorted.end());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        acc += std::pow(std::fabs(sorted[i] - quantile(q)), inner_order);
    }
    return std::pow(acc / static_cast<double>(n), outer_exponent);
}

FamilyFit fit_family(const Eigen::Ref<const Eigen::ArrayXd>& samples, Family family) {
    const Eigen::Index n = samples.size();
    if (n < 100) throw std::invalid_argument("fit_family: needs at least 100 samples");
    const double mean = samples.mean();
    const double m2 = (samples - mean).square().mean();
    if (!(m2 > 0.0)) throw std::invalid_argument("fit_family: degenerate sample (zero variance)");

    FamilyFit fit;
    fit.family = family;
    switch (family) {
        case Family::Normal:
            fit.params = NormalParams{mean, std::sqrt(m2)};
            break;
        case Family::Laplace:
            fit.params = LaplaceParams{mean, (samples - mean).abs().mean()};
            break;
        case Family::DoubleWeibull:
            fit.params = fit_dweibull(samples);
            break;
        case Family::GenNorm:
            fit.params = fit_gennorm(samples);
            break;
    }
    fit.w2_distance =
        wasserstein_distance(samples, [&fit](double q) { return fit.quantile(q); });
    return fit;
}

}  // namespace co3
