#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "co3/comm_ledger.hpp"
#include "co3/feedback.hpp"
#include "co3/fp_grid.hpp"
#include "co3/gennorm.hpp"
#include "co3/huffman.hpp"
#include "co3/level_pmf.hpp"
#include "co3/tasks.hpp"

namespace co3 {

enum class Scheme { CO3, Uncompressed, TopK, FpOnly };

enum class BiasPolicy {
    Fixed,   // keep the bias carried by the format
    Fitted,  // refit GenNorm and rederive the bias every refit interval
};

struct SchemeConfig {
    std::string name = "co3";
    Scheme scheme = Scheme::CO3;
    FpFormat format = FpFormat::fp4();
    BiasPolicy bias_policy = BiasPolicy::Fitted;
    double gamma = 0.7;
    int refit_interval = 5;
    double topk_fraction = 0.5;
    double eta = 0.05;
    int rounds = 50;
    int users = 4;
    std::uint64_t seed = 1;
    std::int64_t mc_bias_samples = 100000;  // budget for the MC bias fallback

    void validate() const;
};

struct RoundRecord {
    int t = 0;
    double loss = 0.0;
    double gap = 0.0;
    std::uint64_t bits_payload = 0;
    std::uint64_t bits_header = 0;
    double mem_l1 = 0.0;
    double mem_l2 = 0.0;  // not part of the CSV schema; used by the theory report
    double grad_l1 = 0.0;
    double beta_hat = 0.0;
    double alpha_hat = 0.0;
    double excess_kurtosis = 0.0;
    double w2_gennorm = 0.0;
    double w2_norm = 0.0;
    double w2_laplace = 0.0;
    double w2_dweibull = 0.0;
    Eigen::VectorXd preq;  // user-0 pre-quantization vector v_t
};

struct ExperimentResult {
    std::vector<RoundRecord> records;
    CommLedger ledger;
    Eigen::VectorXd final_model;
    Eigen::VectorXd mean_model;  // (1/T) sum of the pre-update iterates
};

/// Per-tensor codec state shared between refits: fitted parameters, the grid
/// bias derived from them, and the canonical code.
struct LayerCodec {
    bool valid = false;
    GenNormParams params;
    FpFormat format;
    LevelPmf pmf;
    HuffmanCode code;
};

struct SimState {
    Eigen::VectorXd model;
    std::vector<FeedbackState> users;
    std::vector<std::vector<LayerCodec>> codecs;  // [user][layer]
};

/// One synchronous round of the configured scheme; updates the model, the
/// feedback memories and the ledger, and returns the round telemetry.
RoundRecord run_round(SimState& state, const Task& task, const SchemeConfig& config, int t,
                      CommLedger& ledger);

/// T rounds from the task's initial model. Deterministic for a fixed seed and
/// identical across thread counts.
ExperimentResult run_experiment(const Task& task, const SchemeConfig& config);

struct DiagnosticsRow {
    int t = 0;
    bool degenerate = false;
    double excess_kurtosis = 0.0;
    double beta_hat = 0.0;
    double alpha_hat = 0.0;
    double w2[4] = {0, 0, 0, 0};  // indexed by Family
};

/// Four-family fit of each round's pre-quantization vector; degenerate rounds
/// (too small or constant) are marked rather than fitted.
std::vector<DiagnosticsRow> gradient_diagnostics(const std::vector<RoundRecord>& records);

}  // namespace co3
