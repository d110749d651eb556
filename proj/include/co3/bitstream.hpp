#pragma once

#include <cstdint>
#include <vector>

#include "co3/fp_grid.hpp"
#include "co3/gennorm.hpp"
#include "co3/huffman.hpp"

namespace co3 {

/// One transmitted frame. Layout (all multi-byte fields big-endian):
///   magic "CO3" (0x43 0x4F 0x33), version 0x01,
///   format byte (exp_bits in the high nibble, mant_bits in the low nibble),
///   bias, mu, alpha, beta as IEEE-754 binary64 bit patterns,
///   element count as unsigned 64-bit,
///   Huffman payload MSB-first, zero-padded to a byte boundary.
struct Frame {
    FpFormat format;
    GenNormParams params;
    std::uint64_t count = 0;
    std::vector<std::uint8_t> payload;
};

inline constexpr std::size_t kFrameHeaderBytes = 3 + 1 + 1 + 4 * 8 + 8;
inline constexpr std::uint64_t kFrameHeaderBits = kFrameHeaderBytes * 8;

std::vector<std::uint8_t> pack_frame(const Frame& frame);
Frame parse_frame(const std::vector<std::uint8_t>& bytes);

/// Quantize-and-encode one tensor into a frame (the code is derived from the
/// transmitted GenNorm parameters, so the receiver can rebuild it).
Frame make_frame(const QuantizedBlock& block, const GenNormParams& params,
                 const HuffmanCode& code);

/// Decode a frame back to grid values, rebuilding the canonical code from the
/// header parameters.
Eigen::ArrayXd decode_frame(const Frame& frame);

}  // namespace co3
