#include "co3/fedsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "co3/bias_opt.hpp"
#include "co3/bitstream.hpp"
#include "co3/family_fit.hpp"
#include "co3/parallel.hpp"

namespace co3 {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr Eigen::Index kMinFitSamples = 100;
constexpr double kBetaPolyLo = 0.3;  // fitted range of the bias polynomial
constexpr double kBetaPolyHi = 1.6;

GenNormParams fallback_params(const Eigen::Ref<const Eigen::VectorXd>& v) {
    // Tensors too small or too flat to fit: assume a normal shape at the
    // tensor's RMS scale.
    const double rms = std::sqrt(v.squaredNorm() / std::max<Eigen::Index>(v.size(), 1));
    return {0.0, std::max(rms, 1e-12), 2.0};
}

void refit_codec(LayerCodec& codec, const Eigen::Ref<const Eigen::VectorXd>& v,
                 const SchemeConfig& config, std::uint64_t mc_seed) {
    codec.format = config.format;
    GenNormParams fitted;
    bool have_fit = false;
    if (v.size() >= kMinFitSamples) {
        try {
            fitted = fit_gennorm(v.array());
            have_fit = true;
        } catch (const std::invalid_argument&) {
        }
    }
    if (!have_fit) fitted = fallback_params(v);
    codec.params = fitted;

    if (config.bias_policy == BiasPolicy::Fitted) {
        const double beta_clamped = std::clamp(fitted.beta, kBetaPolyLo, kBetaPolyHi);
        double b = 0.0;
        try {
            b = bias_polynomial(beta_clamped, fitted.alpha, config.format);
        } catch (const std::invalid_argument&) {
        }
        // No polynomial for this format, or a nonpositive value outside the
        // fitted regime: fall back to the Monte-Carlo optimizer.
        if (!(b > 0.0)) {
            FpFormat unit = config.format;
            unit.bias = 0.0;
            b = optimal_bias_mc(fitted, unit, config.mc_bias_samples, mc_seed);
        }
        // b is the reciprocal of the grid scale.
        codec.format.bias = -std::log2(b);
    }
    codec.pmf = level_probabilities(codec.params, codec.format);
    codec.code = build_huffman(codec.pmf.probs);
    codec.valid = true;
}

struct UserRound {
    Eigen::VectorXd g;
    Eigen::VectorXd ghat;
    double grad_l1 = 0.0;
    double mem_l1 = 0.0;
    double mem_l2 = 0.0;
    std::uint64_t payload_bits = 0;
    std::uint64_t header_bits = 0;
    Eigen::VectorXd preq;  // kept for user 0 only
};

}  // namespace

void SchemeConfig::validate() const {
    if (rounds < 1 || users < 1) throw std::invalid_argument("SchemeConfig: rounds, users >= 1");
    if (refit_interval < 1) throw std::invalid_argument("SchemeConfig: refit_interval >= 1");
    if (!(eta > 0.0)) throw std::invalid_argument("SchemeConfig: eta > 0");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("SchemeConfig: gamma in [0,1]");
    if (scheme == Scheme::TopK && !(topk_fraction > 0.0 && topk_fraction <= 1.0))
        throw std::invalid_argument("SchemeConfig: topk_fraction in (0,1]");
    format.validate();
}

RoundRecord run_round(SimState& state, const Task& task, const SchemeConfig& config, int t,
                      CommLedger& ledger) {
    const Eigen::Index d = task.dim();
    const std::vector<Eigen::Index> layers = task.layer_sizes();
    const int users = config.users;
    std::vector<UserRound> rounds(static_cast<std::size_t>(users));

    parallel_for(static_cast<std::size_t>(users), [&](std::size_t uz) {
        const int u = static_cast<int>(uz);
        UserRound& ur = rounds[uz];
        FeedbackState& fb = state.users[uz];
        Rng rng = Rng::derive(config.seed, static_cast<std::uint64_t>(t) + 1,
                              static_cast<std::uint64_t>(u) + 1);
        ur.g = task.local_gradient(state.model, u, rng);
        ur.grad_l1 = ur.g.lpNorm<1>();

        if (config.scheme == Scheme::Uncompressed) {
            // No compression; accounted as one float32 per coordinate.
            ur.ghat = ur.g;
            ur.payload_bits = 32ull * static_cast<std::uint64_t>(d);
            ur.header_bits = 0;
            ur.mem_l1 = 0.0;
            if (u == 0) ur.preq = ur.g;
            return;
        }

        const Eigen::VectorXd v = preprocess(fb, ur.g);
        if (u == 0) ur.preq = v;
        ur.ghat.resize(d);

        Eigen::Index offset = 0;
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const Eigen::Index len = layers[l];
            const Eigen::VectorXd vl = v.segment(offset, len);
            LayerCodec& codec = state.codecs[uz][l];
            if (!codec.valid || (config.bias_policy == BiasPolicy::Fitted &&
                                 t % config.refit_interval == 0)) {
                const std::uint64_t mc_seed =
                    Rng::derive(config.seed, 0xb1a5ULL + static_cast<std::uint64_t>(t),
                                static_cast<std::uint64_t>(u) * 64 + l)
                        .next_u64();
                refit_codec(codec, vl, config, mc_seed);
            }

            if (config.scheme == Scheme::CO3) {
                const QuantizedBlock block = quantize(vl.array(), codec.format);
                const Frame frame = make_frame(block, codec.params, codec.code);
                const std::vector<std::uint8_t> wire = pack_frame(frame);
                // Parameter-server side: parse the wire bytes and rebuild the
                // code from the header.
                const Frame received = parse_frame(wire);
                const Eigen::ArrayXd decoded = decode_frame(received);
                ur.ghat.segment(offset, len) = decoded.matrix();
                const std::uint64_t payload = encode(block.symbols, codec.code).payload_bits;
                ur.payload_bits += payload;
                ur.header_bits += kFrameHeaderBits;
            } else if (config.scheme == Scheme::FpOnly) {
                // Raw fixed-width symbols, no entropy coding.
                const QuantizedBlock block = quantize(vl.array(), codec.format);
                ur.ghat.segment(offset, len) = dequantize(block).matrix();
                ur.payload_bits +=
                    static_cast<std::uint64_t>(len) * config.format.raw_bits();
                ur.header_bits += kFrameHeaderBits;
            } else {  // TopK
                const Eigen::Index keep = std::min<Eigen::Index>(
                    len, static_cast<Eigen::Index>(
                             std::ceil(config.topk_fraction * static_cast<double>(len))));
                std::vector<Eigen::Index> idx(static_cast<std::size_t>(len));
                std::iota(idx.begin(), idx.end(), 0);
                std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
                    return std::fabs(vl[a]) > std::fabs(vl[b]);
                });
                idx.resize(static_cast<std::size_t>(keep));
                Eigen::VectorXd survivors(keep);
                for (Eigen::Index i = 0; i < keep; ++i) survivors[i] = vl[idx[i]];
                const QuantizedBlock block = quantize(survivors.array(), codec.format);
                const Eigen::ArrayXd deq = dequantize(block);
                Eigen::VectorXd rec = Eigen::VectorXd::Zero(len);
                for (Eigen::Index i = 0; i < keep; ++i) rec[idx[i]] = deq[i];
                ur.ghat.segment(offset, len) = rec;
                const int index_bits =
                    len > 1 ? static_cast<int>(std::ceil(std::log2(static_cast<double>(len))))
                            : 1;
                ur.payload_bits += static_cast<std::uint64_t>(keep) *
                                   static_cast<std::uint64_t>(index_bits + config.format.raw_bits());
                ur.header_bits += kFrameHeaderBits;
            }
            offset += len;
        }
        update(fb, ur.g, ur.ghat);
        ur.mem_l1 = memory_norm(fb);
        ur.mem_l2 = fb.memory.norm();
    });

    // Fixed-order reduction at the parameter server.
    Eigen::VectorXd aggregate = Eigen::VectorXd::Zero(d);
    RoundRecord rec;
    rec.t = t;
    for (int u = 0; u < users; ++u) {
        const UserRound& ur = rounds[static_cast<std::size_t>(u)];
        aggregate += ur.ghat;
        ledger.record(static_cast<std::size_t>(t), static_cast<std::size_t>(u), ur.payload_bits,
                      ur.header_bits);
        rec.bits_payload += ur.payload_bits;
        rec.bits_header += ur.header_bits;
        rec.mem_l1 += ur.mem_l1;
        rec.mem_l2 += ur.mem_l2;
        rec.grad_l1 += ur.grad_l1;
    }
    rec.mem_l1 /= users;
    rec.mem_l2 /= users;
    rec.grad_l1 /= users;
    state.model -= (config.eta / users) * aggregate;

    rec.loss = task.loss(state.model);
    rec.gap = task.has_optimum() ? rec.loss - task.optimal_loss() : kNan;
    rec.preq = std::move(rounds[0].preq);

    // Per-round distribution diagnostics on the user-0 pre-quantization vector.
    rec.beta_hat = rec.alpha_hat = rec.excess_kurtosis = kNan;
    rec.w2_gennorm = rec.w2_norm = rec.w2_laplace = rec.w2_dweibull = kNan;
    if (rec.preq.size() >= kMinFitSamples) {
        try {
            const SampleStats stats = sample_stats(rec.preq.array());
            rec.excess_kurtosis = stats.excess_kurtosis;
            const FamilyFit gn = fit_family(rec.preq.array(), Family::GenNorm);
            rec.beta_hat = std::get<GenNormParams>(gn.params).beta;
            rec.alpha_hat = std::get<GenNormParams>(gn.params).alpha;
            rec.w2_gennorm = gn.w2_distance;
            rec.w2_norm = fit_family(rec.preq.array(), Family::Normal).w2_distance;
            rec.w2_laplace = fit_family(rec.preq.array(), Family::Laplace).w2_distance;
            rec.w2_dweibull = fit_family(rec.preq.array(), Family::DoubleWeibull).w2_distance;
        } catch (const std::invalid_argument&) {
            // degenerate round; NaN markers stay
        }
    }
    return rec;
}

ExperimentResult run_experiment(const Task& task, const SchemeConfig& config) {
    config.validate();
    SimState state;
    state.model = task.initial_model();
    state.users.assign(static_cast<std::size_t>(config.users),
                       FeedbackState(task.dim(), config.gamma));
    state.codecs.assign(static_cast<std::size_t>(config.users),
                        std::vector<LayerCodec>(task.layer_sizes().size()));

    ExperimentResult result;
    result.records.reserve(static_cast<std::size_t>(config.rounds));
    Eigen::VectorXd model_sum = Eigen::VectorXd::Zero(task.dim());
    for (int t = 0; t < config.rounds; ++t) {
        model_sum += state.model;  // pre-update iterate, as in the averaged bound
        result.records.push_back(run_round(state, task, config, t, result.ledger));
    }
    result.final_model = state.model;
    result.mean_model = model_sum / config.rounds;
    return result;
}

std::vector<DiagnosticsRow> gradient_diagnostics(const std::vector<RoundRecord>& records) {
    std::vector<DiagnosticsRow> rows;
    rows.reserve(records.size());
    for (const RoundRecord& rec : records) {
        DiagnosticsRow row;
        row.t = rec.t;
        row.degenerate = !(rec.beta_hat == rec.beta_hat);  // NaN marker
        row.excess_kurtosis = rec.excess_kurtosis;
        row.beta_hat = rec.beta_hat;
        row.alpha_hat = rec.alpha_hat;
        row.w2[static_cast<int>(Family::Normal)] = rec.w2_norm;
        row.w2[static_cast<int>(Family::Laplace)] = rec.w2_laplace;
        row.w2[static_cast<int>(Family::DoubleWeibull)] = rec.w2_dweibull;
        row.w2[static_cast<int>(Family::GenNorm)] = rec.w2_gennorm;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace co3
