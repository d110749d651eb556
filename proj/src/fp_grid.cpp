#include "co3/fp_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace co3 {

void FpFormat::validate() const {
    if (exp_bits < 1 || exp_bits > 15 || mant_bits < 0 || mant_bits > 15 ||
        !std::isfinite(bias))
        throw std::invalid_argument("FpFormat: requires 1 <= exp_bits <= 15, 0 <= mant_bits <= 15");
}

std::size_t FpFormat::alphabet_size() const {
    const std::size_t mant = std::size_t{1} << mant_bits;
    const std::size_t exps = static_cast<std::size_t>(exponent_max() - exponent_min() + 1);
    return 2 * mant * exps + 1;
}

double theory_scale_bias(const FpFormat& format, double smoothness_L) {
    format.validate();
    return std::log2(1.0 + smoothness_L) - ((1 << (format.exp_bits - 1)) - 2);
}

Eigen::ArrayXd grid_levels(const FpFormat& format) {
    format.validate();
    const int mant_count = 1 << format.mant_bits;
    std::vector<double> pos;
    pos.reserve(format.alphabet_size() / 2);
    const double scale = std::exp2(format.bias);
    for (int e = format.exponent_min(); e <= format.exponent_max(); ++e) {
        for (int k = 0; k < mant_count; ++k) {
            const double m = 1.0 + static_cast<double>(k) / mant_count;
            pos.push_back(m * std::exp2(e) * scale);
        }
    }
    std::sort(pos.begin(), pos.end());
    Eigen::ArrayXd levels(2 * static_cast<Eigen::Index>(pos.size()) + 1);
    Eigen::Index j = 0;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) levels[j++] = -*it;
    levels[j++] = 0.0;
    for (double v : pos) levels[j++] = v;
    return levels;
}

std::uint32_t quantize_value(double x, const Eigen::ArrayXd& levels) {
    const double* begin = levels.data();
    const double* end = begin + levels.size();
    const double* hi = std::lower_bound(begin, end, x);
    if (hi == end) return static_cast<std::uint32_t>(levels.size() - 1);
    if (hi == begin) return 0;
    const double* lo = hi - 1;
    const double d_lo = x - *lo;
    const double d_hi = *hi - x;
    if (d_lo < d_hi) return static_cast<std::uint32_t>(lo - begin);
    if (d_hi < d_lo) return static_cast<std::uint32_t>(hi - begin);
    // Tie: prefer the level with the smaller magnitude.
    return static_cast<std::uint32_t>((std::fabs(*lo) <= std::fabs(*hi) ? lo : hi) - begin);
}

QuantizedBlock quantize(const Eigen::Ref<const Eigen::ArrayXd>& values, const FpFormat& format) {
    const Eigen::ArrayXd levels = grid_levels(format);
    QuantizedBlock block;
    block.format = format;
    block.symbols.reserve(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw std::invalid_argument("quantize: non-finite input value");
        block.symbols.push_back(quantize_value(values[i], levels));
    }
    return block;
}

Eigen::ArrayXd dequantize(const QuantizedBlock& block) {
    const Eigen::ArrayXd levels = grid_levels(block.format);
    Eigen::ArrayXd out(static_cast<Eigen::Index>(block.symbols.size()));
    for (std::size_t i = 0; i < block.symbols.size(); ++i) {
        if (block.symbols[i] >= static_cast<std::uint32_t>(levels.size()))
            throw std::runtime_error("dequantize: symbol index outside the alphabet");
        out[static_cast<Eigen::Index>(i)] = levels[block.symbols[i]];
    }
    return out;
}

}  // namespace co3
