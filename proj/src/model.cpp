#include "cflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cflow/metrics.hpp"
#include "cflow/rng.hpp"

namespace cflow {

namespace {

double sigmoid(double a) {
    if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
    const double e = std::exp(a);
    return e / (1.0 + e);
}

double clamp_prob(double p) {
    return std::min(1.0 - kProbEpsilon, std::max(kProbEpsilon, p));
}

double bce_term(double p, int y) {
    p = clamp_prob(p);
    return -(y * std::log(p) + (1 - y) * std::log(1.0 - p));
}

void write_block(std::ostream& out, const char* name, size_t rows, size_t cols,
                 const double* data) {
    out << name << ' ' << rows << ' ' << cols << '\n';
    out.precision(17);
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c) out << (c ? " " : "") << data[r * cols + c];
        out << '\n';
    }
}

void read_block(std::istream& in, const std::string& expect_name, size_t rows, size_t cols,
                double* data) {
    std::string name;
    size_t r_in = 0, c_in = 0;
    in >> name >> r_in >> c_in;
    if (name != expect_name || r_in != rows || c_in != cols)
        throw std::runtime_error("checkpoint block mismatch at " + expect_name);
    for (size_t i = 0; i < rows * cols; ++i) in >> data[i];
}

}  // namespace

double bce_loss(std::span<const double> probabilities, std::span<const int> labels) {
    if (probabilities.size() != labels.size())
        throw std::invalid_argument("bce_loss: size mismatch");
    double loss = 0.0;
    for (size_t i = 0; i < probabilities.size(); ++i) loss += bce_term(probabilities[i], labels[i]);
    return loss;
}

// --- logistic regression ---

LogisticModel::LogisticModel(size_t input_dim)
    : input_dim_(input_dim), params_(input_dim + 1, 0.0) {}

double LogisticModel::predict(std::span<const double> history) const {
    if (history.size() != input_dim_)
        throw std::invalid_argument("logistic input length mismatch");
    double a = params_[input_dim_];
    for (size_t i = 0; i < input_dim_; ++i) a += params_[i] * history[i];
    return sigmoid(a);
}

double LogisticModel::loss_grad(std::span<const double> history, int label,
                                std::span<double> grad) const {
    const double p = predict(history);
    const double d = p - label;
    for (size_t i = 0; i < input_dim_; ++i) grad[i] += d * history[i];
    grad[input_dim_] += d;
    return bce_term(p, label);
}

void LogisticModel::save(std::ostream& out) const {
    out << "conceptflow-model v1 logistic\n";
    out << "dim " << input_dim_ << '\n';
    write_block(out, "weights", 1, input_dim_, params_.data());
    write_block(out, "bias", 1, 1, params_.data() + input_dim_);
}

LogisticModel LogisticModel::load(std::istream& in) {
    std::string tag;
    size_t dim = 0;
    in >> tag >> dim;
    if (tag != "dim") throw std::runtime_error("bad logistic checkpoint");
    LogisticModel m(dim);
    read_block(in, "weights", 1, dim, m.params_.data());
    read_block(in, "bias", 1, 1, m.params_.data() + dim);
    return m;
}

// --- GRU ---

struct GruModel::StepCache {
    std::vector<double> h_prev, z, r, s, c;
};

GruModel::GruModel(size_t input_dim, size_t hidden, uint64_t seed)
    : input_dim_(input_dim), hidden_(hidden) {
    if (input_dim == 0 || hidden == 0) throw std::invalid_argument("gru dims must be positive");
    const size_t hx = hidden * input_dim, hh = hidden * hidden;
    off_wz_ = 0;
    off_uz_ = off_wz_ + hx;
    off_bz_ = off_uz_ + hh;
    off_wr_ = off_bz_ + hidden;
    off_ur_ = off_wr_ + hx;
    off_br_ = off_ur_ + hh;
    off_wh_ = off_br_ + hidden;
    off_uh_ = off_wh_ + hx;
    off_bh_ = off_uh_ + hh;
    off_w_ = off_bh_ + hidden;
    off_b_ = off_w_ + hidden;
    params_.resize(off_b_ + 1);

    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (double& p : params_) p = (2.0 * rng.next_double() - 1.0) * scale;
}

double GruModel::forward(std::span<const double> history, std::vector<StepCache>* cache) const {
    if (history.size() % input_dim_ != 0 || history.empty())
        throw std::invalid_argument("gru history shape mismatch");
    const size_t steps = history.size() / input_dim_;
    const size_t H = hidden_, X = input_dim_;
    const double* P = params_.data();

    std::vector<double> h(H, 0.0), z(H), r(H), s(H), c(H);
    for (size_t t = 0; t < steps; ++t) {
        const double* x = history.data() + t * X;
        StepCache st;
        if (cache) st.h_prev = h;
        for (size_t i = 0; i < H; ++i) {
            double az = P[off_bz_ + i], ar = P[off_br_ + i];
            for (size_t j = 0; j < X; ++j) {
                az += P[off_wz_ + i * X + j] * x[j];
                ar += P[off_wr_ + i * X + j] * x[j];
            }
            for (size_t j = 0; j < H; ++j) {
                az += P[off_uz_ + i * H + j] * h[j];
                ar += P[off_ur_ + i * H + j] * h[j];
            }
            z[i] = sigmoid(az);
            r[i] = sigmoid(ar);
        }
        for (size_t i = 0; i < H; ++i) s[i] = r[i] * h[i];
        for (size_t i = 0; i < H; ++i) {
            double ah = P[off_bh_ + i];
            const double* wh = P + off_wh_ + i * X;
            for (size_t j = 0; j < X; ++j) ah += wh[j] * x[j];
            const double* uh = P + off_uh_ + i * H;
            for (size_t j = 0; j < H; ++j) ah += uh[j] * s[j];
            c[i] = std::tanh(ah);
        }
        for (size_t i = 0; i < H; ++i) h[i] = (1.0 - z[i]) * h[i] + z[i] * c[i];
        if (cache) {
            st.z = z;
            st.r = r;
            st.s = s;
            st.c = c;
            cache->push_back(std::move(st));
        }
    }

    double a = P[off_b_];
    for (size_t i = 0; i < H; ++i) a += P[off_w_ + i] * h[i];
    if (cache) {
        // stash the final hidden state for the classifier gradient
        StepCache fin;
        fin.h_prev = h;
        cache->push_back(std::move(fin));
    }
    return sigmoid(a);
}

double GruModel::predict(std::span<const double> history) const {
    return forward(history, nullptr);
}

double GruModel::loss_grad(std::span<const double> history, int label,
                           std::span<double> grad) const {
    std::vector<StepCache> cache;
    const double p = forward(history, &cache);
    const size_t steps = cache.size() - 1;  // last entry holds the final hidden state
    const size_t H = hidden_, X = input_dim_;
    const double* P = params_.data();
    double* G = grad.data();

    const std::vector<double>& h_final = cache.back().h_prev;
    const double d_out = p - label;
    for (size_t i = 0; i < H; ++i) G[off_w_ + i] += d_out * h_final[i];
    G[off_b_] += d_out;

    std::vector<double> dh(H), dh_prev(H), dz(H), dc(H), dah(H), ds(H), dr(H), dar(H), daz(H);
    for (size_t i = 0; i < H; ++i) dh[i] = d_out * P[off_w_ + i];

    for (size_t t = steps; t-- > 0;) {
        const StepCache& st = cache[t];
        const double* x = history.data() + t * X;
        for (size_t i = 0; i < H; ++i) {
            dz[i] = dh[i] * (st.c[i] - st.h_prev[i]);
            dc[i] = dh[i] * st.z[i];
            dh_prev[i] = dh[i] * (1.0 - st.z[i]);
            dah[i] = dc[i] * (1.0 - st.c[i] * st.c[i]);
        }
        for (size_t i = 0; i < H; ++i) {
            double* gwh = G + off_wh_ + i * X;
            for (size_t j = 0; j < X; ++j) gwh[j] += dah[i] * x[j];
            double* guh = G + off_uh_ + i * H;
            for (size_t j = 0; j < H; ++j) guh[j] += dah[i] * st.s[j];
            G[off_bh_ + i] += dah[i];
        }
        std::fill(ds.begin(), ds.end(), 0.0);
        for (size_t i = 0; i < H; ++i) {
            const double* uh = P + off_uh_ + i * H;
            for (size_t j = 0; j < H; ++j) ds[j] += uh[j] * dah[i];
        }
        for (size_t i = 0; i < H; ++i) {
            dr[i] = ds[i] * st.h_prev[i];
            dh_prev[i] += ds[i] * st.r[i];
            dar[i] = dr[i] * st.r[i] * (1.0 - st.r[i]);
            daz[i] = dz[i] * st.z[i] * (1.0 - st.z[i]);
        }
        for (size_t i = 0; i < H; ++i) {
            double* gwr = G + off_wr_ + i * X;
            double* gwz = G + off_wz_ + i * X;
            for (size_t j = 0; j < X; ++j) {
                gwr[j] += dar[i] * x[j];
                gwz[j] += daz[i] * x[j];
            }
            double* gur = G + off_ur_ + i * H;
            double* guz = G + off_uz_ + i * H;
            for (size_t j = 0; j < H; ++j) {
                gur[j] += dar[i] * st.h_prev[j];
                guz[j] += daz[i] * st.h_prev[j];
            }
            G[off_br_ + i] += dar[i];
            G[off_bz_ + i] += daz[i];
        }
        for (size_t i = 0; i < H; ++i) {
            const double* uz_col = P + off_uz_;
            const double* ur_col = P + off_ur_;
            double acc = 0.0;
            for (size_t j = 0; j < H; ++j)
                acc += uz_col[j * H + i] * daz[j] + ur_col[j * H + i] * dar[j];
            dh_prev[i] += acc;
        }
        dh.swap(dh_prev);
    }
    return bce_term(p, label);
}

void GruModel::save(std::ostream& out) const {
    out << "conceptflow-model v1 gru\n";
    out << "dims " << input_dim_ << ' ' << hidden_ << '\n';
    const double* P = params_.data();
    write_block(out, "Wz", hidden_, input_dim_, P + off_wz_);
    write_block(out, "Uz", hidden_, hidden_, P + off_uz_);
    write_block(out, "bz", 1, hidden_, P + off_bz_);
    write_block(out, "Wr", hidden_, input_dim_, P + off_wr_);
    write_block(out, "Ur", hidden_, hidden_, P + off_ur_);
    write_block(out, "br", 1, hidden_, P + off_br_);
    write_block(out, "Wh", hidden_, input_dim_, P + off_wh_);
    write_block(out, "Uh", hidden_, hidden_, P + off_uh_);
    write_block(out, "bh", 1, hidden_, P + off_bh_);
    write_block(out, "w_out", 1, hidden_, P + off_w_);
    write_block(out, "b_out", 1, 1, P + off_b_);
}

GruModel GruModel::load(std::istream& in) {
    std::string tag;
    size_t x = 0, h = 0;
    in >> tag >> x >> h;
    if (tag != "dims") throw std::runtime_error("bad gru checkpoint");
    GruModel m(x, h, 0);
    double* P = m.params_.data();
    read_block(in, "Wz", h, x, P + m.off_wz_);
    read_block(in, "Uz", h, h, P + m.off_uz_);
    read_block(in, "bz", 1, h, P + m.off_bz_);
    read_block(in, "Wr", h, x, P + m.off_wr_);
    read_block(in, "Ur", h, h, P + m.off_ur_);
    read_block(in, "br", 1, h, P + m.off_br_);
    read_block(in, "Wh", h, x, P + m.off_wh_);
    read_block(in, "Uh", h, h, P + m.off_uh_);
    read_block(in, "bh", 1, h, P + m.off_bh_);
    read_block(in, "w_out", 1, h, P + m.off_w_);
    read_block(in, "b_out", 1, 1, P + m.off_b_);
    return m;
}

// --- training ---

namespace {

struct ValidationSplit {
    std::vector<size_t> fit, val;
    bool enabled = false;
};

bool both_classes(const std::vector<TemporalSample>& samples, const std::vector<size_t>& idx) {
    bool pos = false, neg = false;
    for (size_t i : idx) (samples[i].label == 1 ? pos : neg) = true;
    return pos && neg;
}

ValidationSplit split_validation(const std::vector<TemporalSample>& train,
                                 const TrainConfig& cfg) {
    ValidationSplit split;
    if (cfg.patience <= 0 || train.size() < 10) {
        for (size_t i = 0; i < train.size(); ++i) split.fit.push_back(i);
        return split;
    }

    std::set<int> cutoffs;
    for (const auto& s : train) cutoffs.insert(s.cutoff);
    if (cutoffs.size() >= 2) {
        const int held_out = *cutoffs.rbegin();
        for (size_t i = 0; i < train.size(); ++i)
            (train[i].cutoff == held_out ? split.val : split.fit).push_back(i);
        if (both_classes(train, split.val) && both_classes(train, split.fit)) {
            split.enabled = true;
            return split;
        }
        split.fit.clear();
        split.val.clear();
    }

    std::vector<size_t> idx(train.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(mix_seed(cfg.seed, 0x5117));
    rng.shuffle(idx);
    size_t n_val = std::max<size_t>(1, static_cast<size_t>(
                                           static_cast<double>(idx.size()) *
                                           cfg.validation_fraction));
    split.val.assign(idx.begin(), idx.begin() + static_cast<long>(n_val));
    split.fit.assign(idx.begin() + static_cast<long>(n_val), idx.end());
    if (both_classes(train, split.val) && both_classes(train, split.fit)) {
        split.enabled = true;
    } else {
        split.fit.resize(train.size());
        for (size_t i = 0; i < train.size(); ++i) split.fit[i] = i;
        split.val.clear();
    }
    return split;
}

double validation_auc(const Model& model, const std::vector<TemporalSample>& samples,
                      const std::vector<size_t>& idx) {
    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(idx.size());
    for (size_t i : idx) {
        scores.push_back(model.predict(samples[i].history));
        labels.push_back(samples[i].label);
    }
    return auc(scores, labels);
}

}  // namespace

TrainResult train_model(Model& model, const std::vector<TemporalSample>& train,
                        const TrainConfig& cfg) {
    if (train.empty()) throw std::invalid_argument("empty training set");
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("learning rate must be > 0");
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    {
        bool pos = false, neg = false;
        for (const auto& s : train) (s.label == 1 ? pos : neg) = true;
        if (!pos || !neg) throw std::invalid_argument("training set has a single class");
    }

    ValidationSplit split = split_validation(train, cfg);
    const size_t n_params = model.param_count();
    std::vector<double> grad(n_params, 0.0);
    std::vector<double> adam_m(n_params, 0.0), adam_v(n_params, 0.0);
    long adam_t = 0;
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;

    Rng shuffle_rng(mix_seed(cfg.seed, 0xb47c5));
    TrainResult result;
    std::vector<double> best_params = model.params();
    double best_auc = -1.0;
    int stale = 0;

    std::vector<size_t> order = split.fit;
    const size_t batch = std::max(1, cfg.batch_size);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (size_t start = 0; start < order.size(); start += batch) {
            const size_t end = std::min(order.size(), start + batch);
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_loss = 0.0;
            for (size_t i = start; i < end; ++i) {
                const TemporalSample& s = train[order[i]];
                batch_loss += model.loss_grad(s.history, s.label, grad);
            }
            epoch_loss += batch_loss;
            const double scale = 1.0 / static_cast<double>(end - start);
            auto& params = model.params();
            if (cfg.optimizer == TrainConfig::Optimizer::adam) {
                ++adam_t;
                const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam_t));
                const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam_t));
                for (size_t i = 0; i < n_params; ++i) {
                    const double g = grad[i] * scale;
                    adam_m[i] = kBeta1 * adam_m[i] + (1.0 - kBeta1) * g;
                    adam_v[i] = kBeta2 * adam_v[i] + (1.0 - kBeta2) * g * g;
                    params[i] -= cfg.learning_rate * (adam_m[i] / bc1) /
                                 (std::sqrt(adam_v[i] / bc2) + kAdamEps);
                }
            } else {
                for (size_t i = 0; i < n_params; ++i)
                    params[i] -= cfg.learning_rate * grad[i] * scale;
            }
        }
        result.loss_trace.push_back(order.empty() ? 0.0
                                                  : epoch_loss / static_cast<double>(order.size()));
        ++result.epochs_run;

        if (split.enabled) {
            const double val_auc = validation_auc(model, train, split.val);
            if (val_auc > best_auc) {
                best_auc = val_auc;
                best_params = model.params();
                stale = 0;
            } else if (++stale >= cfg.patience) {
                break;
            }
        }
    }

    if (split.enabled) {
        model.params() = best_params;
        result.best_validation_auc = best_auc;
    }
    return result;
}

double grad_check(Model& model, const TemporalSample& sample, double epsilon) {
    const size_t n = model.param_count();
    std::vector<double> analytic(n, 0.0);
    model.loss_grad(sample.history, sample.label, analytic);

    auto loss_at = [&](size_t i, double delta) {
        auto& params = model.params();
        const double saved = params[i];
        params[i] = saved + delta;
        const double p = model.predict(sample.history);
        params[i] = saved;
        return bce_term(p, sample.label);
    };

    double worst = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double numeric = (loss_at(i, epsilon) - loss_at(i, -epsilon)) / (2.0 * epsilon);
        if (!std::isfinite(numeric) || !std::isfinite(analytic[i]))
            throw std::runtime_error("non-finite loss during gradient check");
        const double denom = std::max(1e-8, std::fabs(analytic[i]) + std::fabs(numeric));
        worst = std::max(worst, std::fabs(analytic[i] - numeric) / denom);
    }
    return worst;
}

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model checkpoint: " + path);
    model.save(out);
}

std::unique_ptr<Model> load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read model checkpoint: " + path);
    std::string magic, version, kind;
    in >> magic >> version >> kind;
    if (magic != "conceptflow-model" || version != "v1")
        throw std::runtime_error("unrecognized checkpoint header in " + path);
    if (kind == "logistic") return std::make_unique<LogisticModel>(LogisticModel::load(in));
    if (kind == "gru") return std::make_unique<GruModel>(GruModel::load(in));
    throw std::runtime_error("unknown model kind: " + kind);
}

}  // namespace cflow
