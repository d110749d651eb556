#include "co3/feedback.hpp"

#include <stdexcept>

namespace co3 {

Eigen::VectorXd preprocess(const FeedbackState& state,
                           const Eigen::Ref<const Eigen::VectorXd>& g) {
    if (g.size() != state.memory.size())
        throw std::invalid_argument("preprocess: gradient/memory dimension mismatch");
    return g + state.gamma * state.memory;
}

void update(FeedbackState& state, const Eigen::Ref<const Eigen::VectorXd>& g,
            const Eigen::Ref<const Eigen::VectorXd>& g_hat) {
    if (g.size() != state.memory.size() || g_hat.size() != state.memory.size())
        throw std::invalid_argument("update: gradient/memory dimension mismatch");
    state.memory = state.gamma * state.memory + g - g_hat;
}

double memory_norm(const FeedbackState& state) { return state.memory.lpNorm<1>(); }

}  // namespace co3
