#include "co3/comm_ledger.hpp"

namespace co3 {

void CommLedger::record(std::size_t round, std::size_t user, std::uint64_t payload_bits,
                        std::uint64_t header_bits) {
    if (round >= payload_.size()) payload_.resize(round + 1);
    auto& row = payload_[round];
    if (user >= row.size()) row.resize(user + 1);
    row[user].payload += payload_bits;
    row[user].header += header_bits;
    total_payload_ += payload_bits;
    total_header_ += header_bits;
}

const CommLedger::Cell* CommLedger::cell(std::size_t round, std::size_t user) const {
    if (round >= payload_.size()) return nullptr;
    const auto& row = payload_[round];
    if (user >= row.size()) return nullptr;
    return &row[user];
}

std::uint64_t CommLedger::payload_bits(std::size_t round, std::size_t user) const {
    const Cell* c = cell(round, user);
    return c ? c->payload : 0;
}

std::uint64_t CommLedger::header_bits(std::size_t round, std::size_t user) const {
    const Cell* c = cell(round, user);
    return c ? c->header : 0;
}

std::uint64_t CommLedger::round_bits(std::size_t round) const {
    if (round >= payload_.size()) return 0;
    std::uint64_t acc = 0;
    for (const Cell& c : payload_[round]) acc += c.payload + c.header;
    return acc;
}

}  // namespace co3
