#pragma once
// From-scratch predictive models: logistic regression on the flattened
// history and a GRU sequence classifier, both trained on the summed
// binary cross-entropy with first-order optimizers and verified against
// finite differences.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cflow/dataset.hpp"

namespace cflow {

// Probabilities are clamped to [kProbEpsilon, 1 - kProbEpsilon] inside the
// loss so it stays finite.
constexpr double kProbEpsilon = 1e-12;

// Sum over samples of -[y log p + (1-y) log(1-p)].
double bce_loss(std::span<const double> probabilities, std::span<const int> labels);

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 50;
    int batch_size = 256;
    uint64_t seed = 1;
    int patience = 5;  // epochs without validation-AUC improvement; 0 disables early stop
    enum class Optimizer { sgd, adam } optimizer = Optimizer::adam;
    double validation_fraction = 0.15;  // fallback when a cutoff-based split is impossible
};

class Model {
public:
    virtual ~Model() = default;
    virtual std::string kind() const = 0;
    virtual size_t param_count() const = 0;
    virtual std::vector<double>& params() = 0;
    virtual const std::vector<double>& params() const = 0;

    virtual double predict(std::span<const double> history) const = 0;
    // Adds this sample's BCE gradient into `grad` and returns its loss term.
    virtual double loss_grad(std::span<const double> history, int label,
                             std::span<double> grad) const = 0;

    virtual void save(std::ostream& out) const = 0;
};

class LogisticModel final : public Model {
public:
    explicit LogisticModel(size_t input_dim);  // zero-initialized

    std::string kind() const override { return "logistic"; }
    size_t param_count() const override { return input_dim_ + 1; }
    std::vector<double>& params() override { return params_; }
    const std::vector<double>& params() const override { return params_; }

    size_t input_dim() const { return input_dim_; }
    double weight(size_t i) const { return params_[i]; }
    double bias() const { return params_[input_dim_]; }

    double predict(std::span<const double> history) const override;
    double loss_grad(std::span<const double> history, int label,
                     std::span<double> grad) const override;

    void save(std::ostream& out) const override;
    static LogisticModel load(std::istream& in);

private:
    size_t input_dim_;
    std::vector<double> params_;  // weights..., bias
};

class GruModel final : public Model {
public:
    // Parameters initialized uniform in +-1/sqrt(hidden), seeded.
    GruModel(size_t input_dim, size_t hidden, uint64_t seed);

    std::string kind() const override { return "gru"; }
    size_t param_count() const override { return params_.size(); }
    std::vector<double>& params() override { return params_; }
    const std::vector<double>& params() const override { return params_; }

    size_t input_dim() const { return input_dim_; }
    size_t hidden() const { return hidden_; }

    // history = k rows of input_dim values; hidden state starts at zero.
    double predict(std::span<const double> history) const override;
    double loss_grad(std::span<const double> history, int label,
                     std::span<double> grad) const override;

    void save(std::ostream& out) const override;
    static GruModel load(std::istream& in);

private:
    struct StepCache;
    double forward(std::span<const double> history, std::vector<StepCache>* cache) const;

    size_t input_dim_, hidden_;
    std::vector<double> params_;
    // Offsets into params_: Wz Uz bz | Wr Ur br | Wh Uh bh | w_out b_out
    size_t off_wz_, off_uz_, off_bz_, off_wr_, off_ur_, off_br_, off_wh_, off_uh_, off_bh_,
        off_w_, off_b_;
};

struct TrainResult {
    std::vector<double> loss_trace;  // mean training BCE per epoch
    int epochs_run = 0;
    double best_validation_auc = -1.0;  // -1 when early stopping was off
};

// Mini-batch training, deterministic per (data order, config, seed).
// Early stopping holds out the latest cutoff year when several are present,
// otherwise a seeded random slice.
TrainResult train_model(Model& model, const std::vector<TemporalSample>& train,
                        const TrainConfig& cfg);

// Max over parameters of |analytic - numeric| / max(1e-8, |analytic| + |numeric|)
// using central differences of the clamped BCE.
double grad_check(Model& model, const TemporalSample& sample, double epsilon = 1e-5);

// Checkpoint IO dispatching on the header line.
void save_model(const Model& model, const std::string& path);
std::unique_ptr<Model> load_model(const std::string& path);

}  // namespace cflow
