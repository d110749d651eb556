#pragma once

#include <Eigen/Core>

#include "co3/fp_grid.hpp"
#include "co3/gennorm.hpp"

namespace co3 {

struct LevelPmf {
    Eigen::ArrayXd levels;  // sorted grid values
    Eigen::ArrayXd probs;   // same length, sums to 1
};

/// Probability of each grid level under GenNorm(p): mass of the nearest-level
/// cell, with the outer cells extending to +-infinity.
LevelPmf level_probabilities(const GenNormParams& p, const FpFormat& format);

/// Shannon entropy of the pmf in bits.
double entropy_bits(const Eigen::Ref<const Eigen::ArrayXd>& probs);

}  // namespace co3
