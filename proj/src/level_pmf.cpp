#include "co3/level_pmf.hpp"

#include <cmath>

namespace co3 {

LevelPmf level_probabilities(const GenNormParams& p, const FpFormat& format) {
    p.validate();
    LevelPmf pmf;
    pmf.levels = grid_levels(format);
    const Eigen::Index k = pmf.levels.size();
    pmf.probs.resize(k);
    double prev_cdf = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double upper = i + 1 < k
                                 ? gennorm_cdf(0.5 * (pmf.levels[i] + pmf.levels[i + 1]), p)
                                 : 1.0;
        pmf.probs[i] = upper - prev_cdf;
        prev_cdf = upper;
    }
    return pmf;
}

double entropy_bits(const Eigen::Ref<const Eigen::ArrayXd>& probs) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i)
        if (probs[i] > 0.0) h -= probs[i] * std::log2(probs[i]);
    return h;
}

}  // namespace co3
