#include "co3/huffman.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace co3 {

namespace {

struct Node {
    double weight;
    std::uint32_t min_symbol;  // lowest symbol index in the subtree, for tie-breaking
    int left = -1;             // children as node indices; -1 marks a leaf
    int right = -1;
};

constexpr double kWeightFloor = 1e-12;

}  // namespace

HuffmanCode build_huffman(const Eigen::Ref<const Eigen::ArrayXd>& probs) {
    const std::size_t k = static_cast<std::size_t>(probs.size());
    if (k == 0) throw std::invalid_argument("build_huffman: empty pmf");
    for (Eigen::Index i = 0; i < probs.size(); ++i)
        if (!(probs[i] >= 0.0)) throw std::invalid_argument("build_huffman: negative probability");

    HuffmanCode code;
    code.lengths.assign(k, 0);
    code.codes.assign(k, 0);
    if (k == 1) {
        code.lengths[0] = 1;
        code.codes[0] = 0;
        return code;
    }

    std::vector<Node> nodes;
    nodes.reserve(2 * k);
    using Entry = std::pair<std::pair<double, std::uint32_t>, int>;  // ((weight, min_symbol), node)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (std::uint32_t s = 0; s < k; ++s) {
        const double w = std::max(probs[s], kWeightFloor);
        nodes.push_back({w, s});
        heap.push({{w, s}, static_cast<int>(s)});
    }
    while (heap.size() > 1) {
        const auto a = heap.top();
        heap.pop();
        const auto b = heap.top();
        heap.pop();
        Node merged{a.first.first + b.first.first, std::min(a.first.second, b.first.second),
                    a.second, b.second};
        nodes.push_back(merged);
        heap.push({{merged.weight, merged.min_symbol}, static_cast<int>(nodes.size() - 1)});
    }

    // Depth-first assignment of lengths from the root.
    std::vector<std::pair<int, int>> stack{{heap.top().second, 0}};
    while (!stack.empty()) {
        const auto [idx, depth] = stack.back();
        stack.pop_back();
        const Node& nd = nodes[static_cast<std::size_t>(idx)];
        if (nd.left < 0) {
            code.lengths[nd.min_symbol] = static_cast<std::uint8_t>(depth);
            continue;
        }
        stack.push_back({nd.left, depth + 1});
        stack.push_back({nd.right, depth + 1});
    }

    // Canonical codes in (length, symbol) order.
    std::vector<std::uint32_t> order(k);
    for (std::uint32_t s = 0; s < k; ++s) order[s] = s;
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return code.lengths[a] < code.lengths[b];
    });
    std::uint64_t next = 0;
    int prev_len = 0;
    for (std::uint32_t s : order) {
        const int len = code.lengths[s];
        next <<= (len - prev_len);
        code.codes[s] = next++;
        prev_len = len;
    }
    return code;
}

double expected_length(const HuffmanCode& code, const Eigen::Ref<const Eigen::ArrayXd>& probs) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i)
        acc += probs[i] * code.lengths[static_cast<std::size_t>(i)];
    return acc;
}

double kraft_sum(const HuffmanCode& code) {
    double acc = 0.0;
    for (std::uint8_t len : code.lengths) acc += std::exp2(-static_cast<double>(len));
    return acc;
}

Bitstream encode(const std::vector<std::uint32_t>& symbols, const HuffmanCode& code) {
    Bitstream out;
    std::uint8_t current = 0;
    int filled = 0;
    for (std::uint32_t s : symbols) {
        if (s >= code.size() || code.lengths[s] == 0)
            throw std::runtime_error("encode: symbol outside the alphabet");
        const int len = code.lengths[s];
        const std::uint64_t bits = code.codes[s];
        for (int i = len - 1; i >= 0; --i) {
            current = static_cast<std::uint8_t>((current << 1) | ((bits >> i) & 1ULL));
            if (++filled == 8) {
                out.bytes.push_back(current);
                current = 0;
                filled = 0;
            }
        }
        out.payload_bits += static_cast<std::uint64_t>(len);
    }
    if (filled > 0) out.bytes.push_back(static_cast<std::uint8_t>(current << (8 - filled)));
    return out;
}

std::vector<std::uint32_t> decode(const std::vector<std::uint8_t>& bytes, const HuffmanCode& code,
                                  std::size_t n) {
    // Canonical decoding tables: first code value and symbol offset per length.
    int max_len = 0;
    for (std::uint8_t l : code.lengths) max_len = std::max(max_len, static_cast<int>(l));
    if (max_len == 0 && n > 0) throw std::runtime_error("decode: empty code");
    std::vector<std::uint32_t> order(code.size());
    for (std::uint32_t s = 0; s < code.size(); ++s) order[s] = s;
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return code.lengths[a] < code.lengths[b];
    });
    std::vector<std::uint64_t> first_code(max_len + 1, 0);
    std::vector<std::size_t> offset(max_len + 1, 0);
    std::vector<std::size_t> count(max_len + 1, 0);
    for (std::uint8_t l : code.lengths) ++count[l];
    std::uint64_t next = 0;
    std::size_t pos = 0;
    for (int len = 1; len <= max_len; ++len) {
        next <<= 1;
        first_code[len] = next;
        while (pos < order.size() && code.lengths[order[pos]] < len) ++pos;
        offset[len] = pos;
        next += count[len];
        pos += count[len];
    }

    std::vector<std::uint32_t> symbols;
    symbols.reserve(n);
    const std::uint64_t total_bits = static_cast<std::uint64_t>(bytes.size()) * 8;
    std::uint64_t bit = 0;
    while (symbols.size() < n) {
        std::uint64_t value = 0;
        int len = 0;
        for (;;) {
            if (bit >= total_bits) throw std::runtime_error("decode: truncated stream");
            const std::uint8_t byte = bytes[bit >> 3];
            value = (value << 1) | ((byte >> (7 - (bit & 7))) & 1U);
            ++bit;
            ++len;
            if (len > max_len) throw std::runtime_error("decode: invalid stream");
            if (value >= first_code[len] && value - first_code[len] < count[len]) {
                symbols.push_back(order[offset[len] + (value - first_code[len])]);
                break;
            }
        }
    }
    return symbols;
}

}  // namespace co3
