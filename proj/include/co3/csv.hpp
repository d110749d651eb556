#pragma once

#include <string>
#include <vector>

#include "co3/fedsim.hpp"

namespace co3 {

/// "%.17g" formatting so every double round-trips through the CSV exactly.
std::string format_g17(double v);

std::string records_to_csv(const std::vector<RoundRecord>& records);
void write_records_csv(const std::string& path, const std::vector<RoundRecord>& records);

struct SummaryRow {
    std::string scheme;
    std::uint64_t total_payload_bits = 0;
    std::uint64_t total_header_bits = 0;
    std::uint64_t total_bits = 0;
    double final_loss = 0.0;
    double final_gap = 0.0;
};

std::string summary_to_csv(const std::vector<SummaryRow>& rows);

}  // namespace co3
