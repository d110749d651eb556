#include "co3/bitstream.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

#include "co3/level_pmf.hpp"

namespace co3 {

namespace {

void put_u64_be(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_f64_be(std::vector<std::uint8_t>& out, double v) {
    put_u64_be(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t get_u64_be(const std::vector<std::uint8_t>& in, std::size_t pos) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | in[pos + static_cast<std::size_t>(i)];
    return v;
}

double get_f64_be(const std::vector<std::uint8_t>& in, std::size_t pos) {
    return std::bit_cast<double>(get_u64_be(in, pos));
}

}  // namespace

std::vector<std::uint8_t> pack_frame(const Frame& frame) {
    frame.format.validate();
    std::vector<std::uint8_t> out;
    out.reserve(kFrameHeaderBytes + frame.payload.size());
    out.push_back(0x43);
    out.push_back(0x4f);
    out.push_back(0x33);
    out.push_back(0x01);
    out.push_back(static_cast<std::uint8_t>((frame.format.exp_bits << 4) |
                                            (frame.format.mant_bits & 0x0f)));
    put_f64_be(out, frame.format.bias);
    put_f64_be(out, frame.params.mu);
    put_f64_be(out, frame.params.alpha);
    put_f64_be(out, frame.params.beta);
    put_u64_be(out, frame.count);
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    return out;
}

Frame parse_frame(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kFrameHeaderBytes) throw std::runtime_error("parse_frame: short buffer");
    if (bytes[0] != 0x43 || bytes[1] != 0x4f || bytes[2] != 0x33)
        throw std::runtime_error("parse_frame: bad magic");
    if (bytes[3] != 0x01) throw std::runtime_error("parse_frame: unsupported version");
    Frame frame;
    frame.format.exp_bits = bytes[4] >> 4;
    frame.format.mant_bits = bytes[4] & 0x0f;
    frame.format.bias = get_f64_be(bytes, 5);
    frame.params.mu = get_f64_be(bytes, 13);
    frame.params.alpha = get_f64_be(bytes, 21);
    frame.params.beta = get_f64_be(bytes, 29);
    frame.count = get_u64_be(bytes, 37);
    frame.format.validate();
    frame.payload.assign(bytes.begin() + kFrameHeaderBytes, bytes.end());
    return frame;
}

Frame make_frame(const QuantizedBlock& block, const GenNormParams& params,
                 const HuffmanCode& code) {
    Frame frame;
    frame.format = block.format;
    frame.params = params;
    frame.count = block.symbols.size();
    frame.payload = encode(block.symbols, code).bytes;
    return frame;
}

Eigen::ArrayXd decode_frame(const Frame& frame) {
    const LevelPmf pmf = level_probabilities(frame.params, frame.format);
    const HuffmanCode code = build_huffman(pmf.probs);
    QuantizedBlock block;
    block.format = frame.format;
    block.symbols = decode(frame.payload, code, frame.count);
    return dequantize(block);
}

}  // namespace co3
