#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "co3/rng.hpp"

namespace co3 {

enum class TaskKind { Quadratic, LogisticRegression, TeacherStudentMLP };

struct TaskSpec {
    TaskKind kind = TaskKind::Quadratic;
    int dimension = 32;        // model dimension (quadratic, logistic features)
    int users = 4;
    std::uint64_t data_seed = 1;

    // Stochastic-gradient noise for the quadratic task: i.i.d. GenNorm per
    // coordinate with this scale and shape.
    double noise_scale = 0.5;
    double noise_shape = 1.5;

    // Quadratic Hessian spectrum (eigenvalues spaced linearly).
    double eig_min = 1.0;
    double eig_max = 1.0;
    double init_distance = 1.0;  // |w0 - w*|

    // Logistic regression.
    int samples_per_user = 256;
    int batch = 32;
    double l2_reg = 0.1;

    // Teacher-student MLP.
    int inputs = 8;
    int hidden = 8;
    int outputs = 4;

    // Assumed bound on the true gradient norm; NaN when unknown.
    double grad_bound = std::numeric_limits<double>::quiet_NaN();
};

/// A training task exposing full and per-user stochastic gradients. Gradients
/// are deterministic functions of (model, user, rng stream).
class Task {
  public:
    virtual ~Task() = default;

    virtual Eigen::Index dim() const = 0;
    /// Tensor extents; fits and codes are per tensor. Sizes sum to dim().
    virtual std::vector<Eigen::Index> layer_sizes() const = 0;

    virtual double loss(const Eigen::Ref<const Eigen::VectorXd>& w) const = 0;
    virtual Eigen::VectorXd full_gradient(const Eigen::Ref<const Eigen::VectorXd>& w) const = 0;
    virtual Eigen::VectorXd local_gradient(const Eigen::Ref<const Eigen::VectorXd>& w,
                                           int user, Rng& rng) const = 0;
    virtual Eigen::VectorXd initial_model() const = 0;

    virtual bool has_optimum() const { return false; }
    virtual Eigen::VectorXd optimum() const;
    virtual double optimal_loss() const;

    /// Smoothness L, strong convexity mu, gradient bound G; NaN when unknown.
    virtual double smoothness() const;
    virtual double strong_convexity() const;
    virtual double gradient_bound() const;
};

std::unique_ptr<Task> make_task(const TaskSpec& spec);

}  // namespace co3
