#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace co3 {

/// Sign-exponent-mantissa quantization grid. The sign always takes one bit.
/// The representable values are s * m * 2^(e + bias) for m in
/// {1 + k 2^-mant : k = 0 .. 2^mant - 1} and e in
/// {-(2^(exp-1) - 2), ..., 2^(exp-1) - 1}, plus an explicit zero.
struct FpFormat {
    int exp_bits = 2;
    int mant_bits = 1;
    double bias = 0.0;  // applied as an effective scale 2^bias

    void validate() const;

    int exponent_min() const { return -((1 << (exp_bits - 1)) - 2); }
    int exponent_max() const { return (1 << (exp_bits - 1)) - 1; }
    std::size_t alphabet_size() const;

    /// Raw symbol width in bits (sign + exponent + mantissa).
    int raw_bits() const { return 1 + exp_bits + mant_bits; }

    static FpFormat fp4(double bias = 0.0) { return {2, 1, bias}; }
    static FpFormat fp8(double bias = 0.0) { return {5, 2, bias}; }
};

/// Scale 2^bias matching the hypothesis of the quantization-error bound:
/// c_scale = (1 + L) 2^{-(2^{exp-1} - 2)}.
double theory_scale_bias(const FpFormat& format, double smoothness_L);

/// All representable values, sorted ascending, zero included; symmetric
/// about zero.
Eigen::ArrayXd grid_levels(const FpFormat& format);

struct QuantizedBlock {
    FpFormat format;
    std::vector<std::uint32_t> symbols;  // indices into grid_levels(format)

    std::size_t length() const { return symbols.size(); }
};

/// Nearest grid level in absolute distance; ties break toward the smaller
/// magnitude; values beyond the extreme levels clip. Throws on non-finite
/// input.
QuantizedBlock quantize(const Eigen::Ref<const Eigen::ArrayXd>& values, const FpFormat& format);

/// Exact grid values for the block's symbols.
Eigen::ArrayXd dequantize(const QuantizedBlock& block);

/// Symbol index of a single value against a precomputed level array.
std::uint32_t quantize_value(double x, const Eigen::ArrayXd& levels);

}  // namespace co3
