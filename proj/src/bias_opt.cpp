#include "co3/bias_opt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "co3/rng.hpp"

namespace co3 {

double bias_polynomial(double beta, double sigma, const FpFormat& format) {
    format.validate();
    if (!(beta > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("bias_polynomial: requires beta > 0 and sigma > 0");
    double c0, c1, c2, c3, c4;
    if (format.exp_bits == 2 && format.mant_bits == 1) {
        c0 = 0.46, c1 = -2.85, c2 = 5.37, c3 = -2.85, c4 = 0.52;
    } else if (format.exp_bits == 5 && format.mant_bits == 2) {
        c0 = -5793.0, c1 = 35605.5, c2 = -76511.8, c3 = 68153.0, c4 = -18520.3;
    } else {
        throw std::invalid_argument("bias_polynomial: no fitted polynomial for this format");
    }
    const double b2 = beta * beta;
    return (c0 + c1 * beta + c2 * b2 + c3 * b2 * beta + c4 * b2 * b2) / sigma;
}

double fp_round_with_subnormals(double x, const FpFormat& format) {
    const int emin = format.exponent_min();
    const int emax = format.exponent_max();
    const double max_level = (2.0 - std::exp2(-format.mant_bits)) * std::exp2(emax);
    const double ax = std::fabs(x);
    if (ax >= max_level) return std::copysign(max_level, x);
    int e = std::max(emin, static_cast<int>(std::floor(std::log2(ax > 0 ? ax : 1.0))));
    if (e > emax) e = emax;
    const double step = std::exp2(e - format.mant_bits);
    return std::copysign(std::round(ax / step) * step, x);
}

namespace {

struct BiasLoss {
    const std::vector<double>& samples;
    const FpFormat& format;

    double operator()(double b) const {
        double acc = 0.0;
        if (!(b > 1e-300) || !std::isfinite(b)) {
            // Nonpositive bias means no usable grid scale; the error is the
            // signal itself.
            for (double x : samples) acc += x * x;
            return acc / static_cast<double>(samples.size());
        }
        const double inv = 1.0 / b;
        for (double x : samples) {
            const double q = fp_round_with_subnormals(x * b, format) * inv;
            const double e = q - x;
            acc += e * e;
        }
        return acc / static_cast<double>(samples.size());
    }
};

}  // namespace

double optimal_bias_mc(const GenNormParams& p, const FpFormat& format, std::int64_t n_samples,
                       std::uint64_t seed) {
    p.validate();
    format.validate();
    if (n_samples < 10000)
        throw std::invalid_argument("optimal_bias_mc: needs at least 1e4 samples");
    Rng rng(seed);
    std::vector<double> full(static_cast<std::size_t>(n_samples));
    for (auto& x : full) x = gennorm_sample_one(p, rng);

    const double sigma = p.stddev();
    const double lo = -20.0 / sigma;
    const double hi = 4000.0 / sigma;
    const double step = 0.25 / sigma;  // resolution scales with the bracket

    // Coarse pass on a subsample; the basin is wide relative to the step.
    const std::size_t n_coarse = std::min<std::size_t>(full.size(), 10000);
    std::vector<double> coarse_samples(full.begin(), full.begin() + n_coarse);
    BiasLoss coarse_loss{coarse_samples, format};
    double best_b = step;
    double best_v = coarse_loss(best_b);
    for (double b = lo; b <= hi; b += step) {
        const double v = coarse_loss(b);
        if (v < best_v) {
            best_v = v;
            best_b = b;
        }
    }

    // Golden-section refinement on the full sample, bracketing generously
    // around the coarse pick to absorb subsampling noise.
    BiasLoss loss{full, format};
    double a = best_b - 3.0 * step;
    double b = best_b + 3.0 * step;
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = loss(x1);
    double f2 = loss(x2);
    while (b - a > 1e-5 * std::max(1.0, std::fabs(best_b))) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = loss(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = loss(x2);
        }
    }
    return 0.5 * (a + b);
}

double quantization_error_moment(const GenNormParams& p, const FpFormat& format, std::int64_t n,
                                 std::uint64_t seed) {
    p.validate();
    const Eigen::ArrayXd levels = grid_levels(format);
    Rng rng(seed);
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double g = gennorm_sample_one(p, rng);
        const double e = g - levels[quantize_value(g, levels)];
        acc += e * e;
    }
    return acc / static_cast<double>(n);
}

double quantization_error_tail_moment(const GenNormParams& p, const FpFormat& format,
                                      std::int64_t n, std::uint64_t seed) {
    p.validate();
    const Eigen::ArrayXd levels = grid_levels(format);
    const double boundary = levels[levels.size() - 1];
    Rng rng(seed);
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double g = gennorm_sample_one(p, rng);
        if (g <= boundary) continue;
        const double e = g - levels[quantize_value(g, levels)];
        acc += e * e;
    }
    return acc / static_cast<double>(n);
}

}  // namespace co3
