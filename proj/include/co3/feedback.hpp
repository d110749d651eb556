#pragma once

#include <Eigen/Core>

namespace co3 {

/// Decayed error-feedback memory m_t with decay coefficient gamma. The memory
/// starts at zero and keeps the model dimension for its whole lifetime; it is
/// never quantized.
struct FeedbackState {
    Eigen::VectorXd memory;
    double gamma = 0.7;

    explicit FeedbackState(Eigen::Index dim = 0, double gamma_ = 0.7)
        : memory(Eigen::VectorXd::Zero(dim)), gamma(gamma_) {}
};

/// v = g + gamma * m_{t-1}; the state is not modified here.
Eigen::VectorXd preprocess(const FeedbackState& state, const Eigen::Ref<const Eigen::VectorXd>& g);

/// m_t = gamma * m_{t-1} + g - g_hat.
void update(FeedbackState& state, const Eigen::Ref<const Eigen::VectorXd>& g,
            const Eigen::Ref<const Eigen::VectorXd>& g_hat);

/// L1 norm of the memory.
double memory_norm(const FeedbackState& state);

}  // namespace co3
