#pragma once

#include <cstdint>

#include "co3/fp_grid.hpp"
#include "co3/gennorm.hpp"

namespace co3 {

/// Fitted polynomial for the mean-square-optimal exponent bias as a function
/// of the shape, divided by the scale sigma. Defined for the fp4 [1,2,1] and
/// fp8 [1,5,2] formats only (fitted range beta in [0.3, 1.6]); any other
/// format throws so callers can fall back to optimal_bias_mc.
double bias_polynomial(double beta, double sigma, const FpFormat& format);

/// Monte-Carlo minimizer of E[(Q_fp(G; b) - G)^2] over the bias b for
/// G ~ GenNorm(p). The bias acts as the reciprocal of the grid scale:
/// Q_fp(x; b) rounds b*x in the sign-exponent-mantissa format (subnormal
/// binade included, as in the conversion the polynomial fits were produced
/// from) and divides back by b. Coarse grid pass at resolution 0.25 over
/// [-20/sigma, 4000/sigma], then golden-section refinement. Deterministic
/// given the seed.
double optimal_bias_mc(const GenNormParams& p, const FpFormat& format, std::int64_t n_samples,
                       std::uint64_t seed);

/// Round-to-nearest conversion into the minifloat value set including the
/// subnormal binade; used by the bias optimizer only (the transmission
/// alphabet has no subnormals).
double fp_round_with_subnormals(double x, const FpFormat& format);

/// Monte-Carlo estimate of E[E^2] with E = G - Q(G) under the format's grid
/// (bias taken from the format, typically the theory scale).
double quantization_error_moment(const GenNormParams& p, const FpFormat& format, std::int64_t n,
                                 std::uint64_t seed);

/// Monte-Carlo estimate of the one-sided tail moment E[E^2 1{G > B}] with B
/// the largest grid level.
double quantization_error_tail_moment(const GenNormParams& p, const FpFormat& format,
                                      std::int64_t n, std::uint64_t seed);

}  // namespace co3
