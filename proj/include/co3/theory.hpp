#pragma once

#include <cstdint>
#include <vector>

#include "co3/fedsim.hpp"
#include "co3/fp_grid.hpp"
#include "co3/tasks.hpp"

namespace co3 {

struct TheoryParams {
    double smoothness = 1.0;        // L
    double strong_convexity = 1.0;  // mu
    double grad_bound = 1.0;        // G
    int rounds = 100;               // T; step size is 1/sqrt(T)
    int mant_bits = 1;

    void validate() const;
};

/// Quantization-error bound 2^(4 - 2 mant) + 0.3.
double quantization_error_bound(int mant_bits);

struct AssumptionReport {
    double smoothness = 0.0;
    double strong_convexity = 0.0;
    double grad_bound = 0.0;
    double max_grad_norm = 0.0;
    int violations = 0;  // trajectory points with |grad| > G
    bool ok = false;
};

/// Checks the bounded-gradient assumption along a trajectory and reports the
/// task's curvature constants. Exact for the quadratic task (diagonal
/// Hessian); other tasks are unsupported here.
AssumptionReport check_assumptions(const Task& task,
                                   const std::vector<Eigen::VectorXd>& trajectory);

struct QuantErrorRow {
    double beta = 0.0;
    double moment = 0.0;       // Monte-Carlo E[E^2]
    double tail_moment = 0.0;  // E[E^2 1{G > B}]
    double bound = 0.0;
    bool ok = false;
};

/// Monte-Carlo verification of the quantization-error bound at the theory
/// scale (c_scale with L = 0) over a grid of shapes with unit scale.
std::vector<QuantErrorRow> verify_quantization_error(const FpFormat& base_format,
                                                     const std::vector<double>& beta_grid,
                                                     std::int64_t n, std::uint64_t seed,
                                                     double tail_limit = 0.15);

/// Right-hand side of the convergence bound:
/// w0_gap/sqrt(T) + G^2/sqrt(T) + (mu + 2L)(2^(4-2 mant) + 0.3)/T,
/// with w0_gap = |w_0 - w*|^2.
double convergence_bound(const TheoryParams& p, double w0_gap);

struct BoundReport {
    int rounds = 0;
    double empirical_gap = 0.0;  // mean over repeats of L(wbar_T) - L*
    double gap_stderr = 0.0;
    double bound_value = 0.0;
    bool satisfied = false;
    // Intermediate quantities so the analysis chain stays auditable.
    double eta = 0.0;
    double mean_memory_sq = 0.0;  // average |m_t|^2 along the runs
};

/// Runs n_repeats seeded trajectories of the pipeline on the quadratic task
/// with the theory-scale bias, gamma = 1 and eta = 1/sqrt(T); estimates
/// E L(wbar_T) - L* on the averaged iterate and compares to convergence_bound.
BoundReport verify_convergence(const TaskSpec& task_spec, const FpFormat& base_format, int rounds,
                               int n_repeats, std::uint64_t seed);

}  // namespace co3
