#include "co3/tasks.hpp"

#include <cmath>
#include <stdexcept>

#include "co3/gennorm.hpp"

namespace co3 {

Eigen::VectorXd Task::optimum() const {
    throw std::logic_error("Task::optimum: not available for this task");
}

double Task::optimal_loss() const {
    throw std::logic_error("Task::optimal_loss: not available for this task");
}

double Task::smoothness() const { return std::numeric_limits<double>::quiet_NaN(); }
double Task::strong_convexity() const { return std::numeric_limits<double>::quiet_NaN(); }
double Task::gradient_bound() const { return std::numeric_limits<double>::quiet_NaN(); }

namespace {

class QuadraticTask final : public Task {
  public:
    explicit QuadraticTask(const TaskSpec& spec) : spec_(spec) {
        const int d = spec.dimension;
        eigs_.resize(d);
        for (int i = 0; i < d; ++i)
            eigs_[i] = d > 1 ? spec.eig_min + (spec.eig_max - spec.eig_min) * i / (d - 1)
                             : spec.eig_min;
        Rng rng = Rng::derive(spec.data_seed, 0x5175616472ULL, 0);
        w_star_.resize(d);
        for (int i = 0; i < d; ++i) w_star_[i] = rng.normal();
        offset_.resize(d);
        for (int i = 0; i < d; ++i) offset_[i] = rng.normal();
        offset_ *= spec.init_distance / offset_.norm();
    }

    Eigen::Index dim() const override { return spec_.dimension; }
    std::vector<Eigen::Index> layer_sizes() const override { return {dim()}; }

    double loss(const Eigen::Ref<const Eigen::VectorXd>& w) const override {
        const Eigen::VectorXd d = w - w_star_;
        return 0.5 * d.dot(eigs_.asDiagonal() * d);
    }

    Eigen::VectorXd full_gradient(const Eigen::Ref<const Eigen::VectorXd>& w) const override {
        return eigs_.asDiagonal() * (w - w_star_);
    }

    Eigen::VectorXd local_gradient(const Eigen::Ref<const Eigen::VectorXd>& w, int /*user*/,
                                   Rng& rng) const override {
        Eigen::VectorXd g = full_gradient(w);
        if (spec_.noise_scale > 0.0) {
            const GenNormParams noise{0.0, spec_.noise_scale, spec_.noise_shape};
            for (Eigen::Index i = 0; i < g.size(); ++i) g[i] += gennorm_sample_one(noise, rng);
        }
        return g;
    }

    Eigen::VectorXd initial_model() const override { return w_star_ + offset_; }

    bool has_optimum() const override { return true; }
    Eigen::VectorXd optimum() const override { return w_star_; }
    double optimal_loss() const override { return 0.0; }
    double smoothness() const override { return eigs_.maxCoeff(); }
    double strong_convexity() const override { return eigs_.minCoeff(); }
    double gradient_bound() const override {
        if (std::isfinite(spec_.grad_bound)) return spec_.grad_bound;
        // The trajectory stays near the initial ball; twice the initial
        // gradient norm is a generous default.
        return 2.0 * smoothness() * spec_.init_distance;
    }

  private:
    TaskSpec spec_;
    Eigen::VectorXd eigs_;
    Eigen::VectorXd w_star_;
    Eigen::VectorXd offset_;
};

class LogisticTask final : public Task {
  public:
    explicit LogisticTask(const TaskSpec& spec) : spec_(spec) {
        const int d = spec.dimension;
        Rng rng = Rng::derive(spec.data_seed, 0x4c6f676973ULL, 0);
        Eigen::VectorXd w_true(d);
        for (int i = 0; i < d; ++i) w_true[i] = rng.normal();
        w_true *= 2.0 / w_true.norm();
        x_.resize(spec.users);
        y_.resize(spec.users);
        for (int u = 0; u < spec.users; ++u) {
            x_[u].resize(spec.samples_per_user, d);
            y_[u].resize(spec.samples_per_user);
            for (int i = 0; i < spec.samples_per_user; ++i) {
                for (int j = 0; j < d; ++j) x_[u](i, j) = rng.normal();
                const double p = 1.0 / (1.0 + std::exp(-x_[u].row(i).dot(w_true)));
                y_[u][i] = rng.uniform() < p ? 1.0 : -1.0;
            }
        }
        // Smoothness: 0.25 * max eigenvalue of the pooled X'X / N, by power
        // iteration, plus the regularizer.
        Eigen::VectorXd v = Eigen::VectorXd::Ones(d).normalized();
        const double n_total = static_cast<double>(spec.users * spec.samples_per_user);
        for (int it = 0; it < 200; ++it) {
            Eigen::VectorXd next = Eigen::VectorXd::Zero(d);
            for (const auto& xu : x_) next += xu.transpose() * (xu * v);
            next /= n_total;
            smoothness_ = next.norm();
            v = next.normalized();
        }
        smoothness_ = 0.25 * smoothness_ + spec.l2_reg;
    }

    Eigen::Index dim() const override { return spec_.dimension; }
    std::vector<Eigen::Index> layer_sizes() const override { return {dim()}; }

    double loss(const Eigen::Ref<const Eigen::VectorXd>& w) const override {
        double acc = 0.0;
        std::size_t n = 0;
        for (std::size_t u = 0; u < x_.size(); ++u) {
            const Eigen::VectorXd margins = (x_[u] * w).cwiseProduct(y_[u]);
            // log(1 + e^-m) in the overflow-safe form.
            for (Eigen::Index i = 0; i < margins.size(); ++i)
                acc += std::max(0.0, -margins[i]) + std::log1p(std::exp(-std::fabs(margins[i])));
            n += static_cast<std::size_t>(margins.size());
        }
        return acc / static_cast<double>(n) + 0.5 * spec_.l2_reg * w.squaredNorm();
    }

    Eigen::VectorXd full_gradient(const Eigen::Ref<const Eigen::VectorXd>& w) const override {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
        std::size_t n = 0;
        for (std::size_t u = 0; u < x_.size(); ++u) {
            const Eigen::VectorXd margins = (x_[u] * w).cwiseProduct(y_[u]);
            for (Eigen::Index i = 0; i < margins.size(); ++i) {
                const double s = -1.0 / (1.0 + std::exp(margins[i]));
                g += s * y_[u][i] * x_[u].row(i).transpose();
            }
            n += static_cast<std::size_t>(margins.size());
        }
        return g / static_cast<double>(n) + spec_.l2_reg * w;
    }

    Eigen::VectorXd local_gradient(const Eigen::Ref<const Eigen::VectorXd>& w, int user,
                                   Rng& rng) const override {
        const auto& xu = x_[static_cast<std::size_t>(user)];
        const auto& yu = y_[static_cast<std::size_t>(user)];
        Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
        for (int b = 0; b < spec_.batch; ++b) {
            const auto i = static_cast<Eigen::Index>(rng.uniform() * xu.rows());
            const double margin = yu[i] * xu.row(i).dot(w);
            const double s = -1.0 / (1.0 + std::exp(margin));
            g += s * yu[i] * xu.row(i).transpose();
        }
        return g / spec_.batch + spec_.l2_reg * w;
    }

    Eigen::VectorXd initial_model() const override { return Eigen::VectorXd::Zero(dim()); }
    double smoothness() const override { return smoothness_; }
    double strong_convexity() const override { return spec_.l2_reg; }

  private:
    TaskSpec spec_;
    std::vector<Eigen::MatrixXd> x_;
    std::vector<Eigen::VectorXd> y_;
    double smoothness_ = 0.0;
};

class TeacherStudentTask final : public Task {
  public:
    explicit TeacherStudentTask(const TaskSpec& spec) : spec_(spec) {
        Rng rng = Rng::derive(spec.data_seed, 0x5465616368ULL, 0);
        teacher_w1_ = random_matrix(spec.hidden, spec.inputs, rng) / std::sqrt(spec.inputs);
        teacher_w2_ = random_matrix(spec.outputs, spec.hidden, rng) / std::sqrt(spec.hidden);
        eval_x_ = random_matrix(spec.inputs, 256, rng);
        init_w1_ = random_matrix(spec.hidden, spec.inputs, rng) / std::sqrt(spec.inputs);
        init_w2_ = random_matrix(spec.outputs, spec.hidden, rng) / std::sqrt(spec.hidden);
    }

    Eigen::Index dim() const override {
        return static_cast<Eigen::Index>(spec_.hidden) * spec_.inputs +
               static_cast<Eigen::Index>(spec_.outputs) * spec_.hidden;
    }

    std::vector<Eigen::Index> layer_sizes() const override {
        return {static_cast<Eigen::Index>(spec_.hidden) * spec_.inputs,
                static_cast<Eigen::Index>(spec_.outputs) * spec_.hidden};
    }

    double loss(const Eigen::Ref<const Eigen::VectorXd>& w) const override {
        return batch_loss(w, eval_x_, nullptr);
    }

    Eigen::VectorXd full_gradient(const Eigen::Ref<const Eigen::VectorXd>& w) const override {
        Eigen::VectorXd g(dim());
        batch_loss(w, eval_x_, &g);
        return g;
    }

    Eigen::VectorXd local_gradient(const Eigen::Ref<const Eigen::VectorXd>& w, int /*user*/,
                                   Rng& rng) const override {
        Eigen::MatrixXd x(spec_.inputs, spec_.batch);
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = rng.normal();
        Eigen::VectorXd g(dim());
        batch_loss(w, x, &g);
        return g;
    }

    Eigen::VectorXd initial_model() const override {
        Eigen::VectorXd w(dim());
        pack(init_w1_, init_w2_, w);
        return w;
    }

  private:
    static Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng) {
        Eigen::MatrixXd m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
        return m;
    }

    void pack(const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2,
              Eigen::Ref<Eigen::VectorXd> w) const {
        w.head(w1.size()) = Eigen::Map<const Eigen::VectorXd>(w1.data(), w1.size());
        w.tail(w2.size()) = Eigen::Map<const Eigen::VectorXd>(w2.data(), w2.size());
    }

    // Half mean squared error of the student against the teacher on the given
    // inputs; optionally writes the packed gradient.
    double batch_loss(const Eigen::Ref<const Eigen::VectorXd>& w, const Eigen::MatrixXd& x,
                      Eigen::VectorXd* grad) const {
        const Eigen::Map<const Eigen::MatrixXd> w1(w.data(), spec_.hidden, spec_.inputs);
        const Eigen::Map<const Eigen::MatrixXd> w2(w.data() + w1.size(), spec_.outputs,
                                                   spec_.hidden);
        const Eigen::MatrixXd teacher_h = (teacher_w1_ * x).array().tanh();
        const Eigen::MatrixXd target = teacher_w2_ * teacher_h;
        const Eigen::MatrixXd pre = w1 * x;
        const Eigen::MatrixXd h = pre.array().tanh();
        const Eigen::MatrixXd out = w2 * h;
        const Eigen::MatrixXd resid = out - target;
        const double n = static_cast<double>(x.cols());
        if (grad) {
            const Eigen::MatrixXd g2 = resid * h.transpose() / n;
            const Eigen::MatrixXd dh =
                (w2.transpose() * resid).cwiseProduct((1.0 - h.array().square()).matrix());
            const Eigen::MatrixXd g1 = dh * x.transpose() / n;
            grad->resize(dim());
            grad->head(g1.size()) = Eigen::Map<const Eigen::VectorXd>(g1.data(), g1.size());
            grad->tail(g2.size()) = Eigen::Map<const Eigen::VectorXd>(g2.data(), g2.size());
        }
        return 0.5 * resid.squaredNorm() / n;
    }

    TaskSpec spec_;
    Eigen::MatrixXd teacher_w1_, teacher_w2_;
    Eigen::MatrixXd init_w1_, init_w2_;
    Eigen::MatrixXd eval_x_;
};

}  // namespace

std::unique_ptr<Task> make_task(const TaskSpec& spec) {
    if (spec.dimension < 1 || spec.users < 1)
        throw std::invalid_argument("make_task: dimension and users must be positive");
    switch (spec.kind) {
        case TaskKind::Quadratic: return std::make_unique<QuadraticTask>(spec);
        case TaskKind::LogisticRegression: return std::make_unique<LogisticTask>(spec);
        case TaskKind::TeacherStudentMLP: return std::make_unique<TeacherStudentTask>(spec);
    }
    throw std::invalid_argument("make_task: unknown task kind");
}

}  // namespace co3
