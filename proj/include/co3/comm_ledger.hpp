#pragma once

#include <cstdint>
#include <vector>

namespace co3 {

/// Per-round, per-user bit accounting. Payload (codeword) bits and header
/// (side-information) bits are tracked separately; the grand total is their
/// sum over all recorded entries.
class CommLedger {
  public:
    void record(std::size_t round, std::size_t user, std::uint64_t payload_bits,
                std::uint64_t header_bits);

    std::uint64_t payload_bits(std::size_t round, std::size_t user) const;
    std::uint64_t header_bits(std::size_t round, std::size_t user) const;
    std::uint64_t round_bits(std::size_t round) const;

    std::uint64_t total_payload_bits() const { return total_payload_; }
    std::uint64_t total_header_bits() const { return total_header_; }
    std::uint64_t total_bits() const { return total_payload_ + total_header_; }

    std::size_t rounds() const { return payload_.size(); }

  private:
    struct Cell {
        std::uint64_t payload = 0;
        std::uint64_t header = 0;
    };
    const Cell* cell(std::size_t round, std::size_t user) const;

    std::vector<std::vector<Cell>> payload_;
    std::uint64_t total_payload_ = 0;
    std::uint64_t total_header_ = 0;
};

}  // namespace co3
