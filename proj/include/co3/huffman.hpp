#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace co3 {

/// Canonical Huffman code over a fixed alphabet. Codes are assigned in
/// (length, symbol index) order so identical pmfs always produce bit-identical
/// codebooks.
struct HuffmanCode {
    std::vector<std::uint8_t> lengths;  // codeword length per symbol
    std::vector<std::uint64_t> codes;   // canonical codeword, MSB-first in the low bits

    std::size_t size() const { return lengths.size(); }
};

/// Build the code from symbol probabilities. Merging always takes the two
/// lowest-weight nodes, ties broken by the lowest symbol index contained.
/// Zero probabilities are floored to a tiny weight so every symbol stays
/// encodable (they end up at the maximum assigned length). A single-symbol
/// alphabet gets length 1. Throws on an empty pmf.
HuffmanCode build_huffman(const Eigen::Ref<const Eigen::ArrayXd>& probs);

/// Expected codeword length under the given pmf, in bits.
double expected_length(const HuffmanCode& code, const Eigen::Ref<const Eigen::ArrayXd>& probs);

double kraft_sum(const HuffmanCode& code);

struct Bitstream {
    std::vector<std::uint8_t> bytes;  // MSB-first, zero-padded to a byte boundary
    std::uint64_t payload_bits = 0;   // bit count before padding
};

/// Concatenated codewords for the symbol sequence.
Bitstream encode(const std::vector<std::uint32_t>& symbols, const HuffmanCode& code);

/// Inverse of encode; needs the element count. Throws on truncated or invalid
/// streams.
std::vector<std::uint32_t> decode(const std::vector<std::uint8_t>& bytes, const HuffmanCode& code,
                                  std::size_t n);

}  // namespace co3
