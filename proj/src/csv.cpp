#include "co3/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace co3 {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string records_to_csv(const std::vector<RoundRecord>& records) {
    std::ostringstream out;
    out << "t,loss,gap,bits_payload,bits_header,mem_l1,grad_l1,beta_hat,alpha_hat,"
           "w2_gennorm,w2_norm,w2_laplace,w2_dweibull\n";
    for (const RoundRecord& r : records) {
        out << r.t << ',' << format_g17(r.loss) << ',' << format_g17(r.gap) << ','
            << r.bits_payload << ',' << r.bits_header << ',' << format_g17(r.mem_l1) << ','
            << format_g17(r.grad_l1) << ',' << format_g17(r.beta_hat) << ','
            << format_g17(r.alpha_hat) << ',' << format_g17(r.w2_gennorm) << ','
            << format_g17(r.w2_norm) << ',' << format_g17(r.w2_laplace) << ','
            << format_g17(r.w2_dweibull) << '\n';
    }
    return out.str();
}

void write_records_csv(const std::string& path, const std::vector<RoundRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << records_to_csv(records);
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "scheme,total_payload_bits,total_header_bits,total_bits,final_loss,final_gap\n";
    for (const SummaryRow& r : rows) {
        out << r.scheme << ',' << r.total_payload_bits << ',' << r.total_header_bits << ','
            << r.total_bits << ',' << format_g17(r.final_loss) << ',' << format_g17(r.final_gap)
            << '\n';
    }
    return out.str();
}

}  // namespace co3
