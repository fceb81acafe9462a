#include "ticketclass/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ticketclass/errors.hpp"
#include "ticketclass/rng.hpp"

namespace ticketclass {

const char* to_string(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Logistic: return "logistic";
    }
    return "tanh";
}

const char* to_string(LearningRatePolicy p) {
    return p == LearningRatePolicy::Constant ? "constant" : "adaptive";
}

Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::Tanh;
    if (s == "relu") return Activation::Relu;
    if (s == "logistic") return Activation::Logistic;
    throw ConfigError("unknown activation \"" + s + "\"");
}

LearningRatePolicy lr_policy_from_string(const std::string& s) {
    if (s == "constant") return LearningRatePolicy::Constant;
    if (s == "adaptive") return LearningRatePolicy::Adaptive;
    throw ConfigError("unknown learning rate policy \"" + s + "\"");
}

void MlpParams::validate() const {
    for (const std::size_t size : hidden_layers) {
        if (size < 1) {
            throw ConfigError("hidden layer sizes must be >= 1");
        }
    }
    if (max_iter < 1) {
        throw ConfigError("max_iter must be >= 1");
    }
    if (initial_lr <= 0.0) {
        throw ConfigError("initial_lr must be positive");
    }
    if (momentum < 0.0 || momentum >= 1.0) {
        throw ConfigError("momentum must be in [0, 1)");
    }
    if (batch_size < 1) {
        throw ConfigError("batch_size must be >= 1");
    }
    if (tol <= 0.0) {
        throw ConfigError("tol must be positive");
    }
}

namespace {

double activate(Activation a, double z) {
    switch (a) {
        case Activation::Tanh: return std::tanh(z);
        case Activation::Relu: return z > 0.0 ? z : 0.0;
        case Activation::Logistic: return 1.0 / (1.0 + std::exp(-z));
    }
    return z;
}

// Derivative expressed through the activation value.
double activate_grad(Activation a, double value) {
    switch (a) {
        case Activation::Tanh: return 1.0 - value * value;
        case Activation::Relu: return value > 0.0 ? 1.0 : 0.0;
        case Activation::Logistic: return value * (1.0 - value);
    }
    return 1.0;
}

double logistic(double z) {
    return 1.0 / (1.0 + std::exp(-z));
}

// log(1 + e^z), overflow-safe.
double softplus(double z) {
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

// Activations for one batch, layer by layer. acts[0] is unused for the sparse
// input; acts[l>=1] is batch x layer_sizes[l], row-major.
struct BatchState {
    std::vector<std::vector<double>> acts;
};

void forward_batch(const MlpModel& model, const SparseMatrix& X,
                   std::span<const std::size_t> batch, BatchState& state) {
    const std::size_t n_layers = model.layer_sizes.size();
    const std::size_t batch_n = batch.size();
    state.acts.assign(n_layers, {});

    for (std::size_t l = 1; l < n_layers; ++l) {
        const std::size_t fan_in = model.layer_sizes[l - 1];
        const std::size_t fan_out = model.layer_sizes[l];
        const auto& W = model.weights[l - 1];
        const auto& b = model.biases[l - 1];
        auto& out = state.acts[l];
        out.assign(batch_n * fan_out, 0.0);

        for (std::size_t s = 0; s < batch_n; ++s) {
            double* z = out.data() + s * fan_out;
            for (std::size_t h = 0; h < fan_out; ++h) {
                z[h] = b[h];
            }
            if (l == 1) {
                const std::size_t row = batch[s];
                const auto cols = X.row_cols(row);
                const auto vals = X.row_values(row);
                for (std::size_t k = 0; k < cols.size(); ++k) {
                    const double v = vals[k];
                    const double* w_row = W.data() + static_cast<std::size_t>(cols[k]) * fan_out;
                    for (std::size_t h = 0; h < fan_out; ++h) {
                        z[h] += v * w_row[h];
                    }
                }
            } else {
                const double* prev = state.acts[l - 1].data() + s * fan_in;
                for (std::size_t j = 0; j < fan_in; ++j) {
                    const double v = prev[j];
                    if (v == 0.0) {
                        continue;
                    }
                    const double* w_row = W.data() + j * fan_out;
                    for (std::size_t h = 0; h < fan_out; ++h) {
                        z[h] += v * w_row[h];
                    }
                }
            }
            const bool output_layer = (l == n_layers - 1);
            for (std::size_t h = 0; h < fan_out; ++h) {
                z[h] = output_layer ? z[h]  // keep the logit; loss works on it
                                    : activate(model.params.activation, z[h]);
            }
        }
    }
}

// Mean BCE over the batch plus gradients. Gradients are accumulated into
// `grads`, which must be zero-initialized to the model's shapes.
double backprop_batch(const MlpModel& model, const SparseMatrix& X,
                      const std::vector<int>& y, std::span<const std::size_t> batch,
                      BatchState& state, Gradients& grads) {
    forward_batch(model, X, batch, state);
    const std::size_t n_layers = model.layer_sizes.size();
    const std::size_t batch_n = batch.size();
    const double inv_n = 1.0 / static_cast<double>(batch_n);

    double loss = 0.0;
    // delta for the current layer, batch x units.
    std::vector<double> delta(batch_n);
    for (std::size_t s = 0; s < batch_n; ++s) {
        const double z = state.acts[n_layers - 1][s];
        const double target = static_cast<double>(y[batch[s]]);
        loss += softplus(z) - target * z;
        delta[s] = (logistic(z) - target) * inv_n;
    }
    loss *= inv_n;

    std::vector<double> next_delta;
    for (std::size_t l = n_layers - 1; l >= 1; --l) {
        const std::size_t fan_in = model.layer_sizes[l - 1];
        const std::size_t fan_out = model.layer_sizes[l];
        const auto& W = model.weights[l - 1];
        auto& gW = grads.weights[l - 1];
        auto& gb = grads.biases[l - 1];

        for (std::size_t s = 0; s < batch_n; ++s) {
            const double* d = delta.data() + s * fan_out;
            for (std::size_t h = 0; h < fan_out; ++h) {
                gb[h] += d[h];
            }
            if (l == 1) {
                const std::size_t row = batch[s];
                const auto cols = X.row_cols(row);
                const auto vals = X.row_values(row);
                for (std::size_t k = 0; k < cols.size(); ++k) {
                    double* g_row = gW.data() + static_cast<std::size_t>(cols[k]) * fan_out;
                    const double v = vals[k];
                    for (std::size_t h = 0; h < fan_out; ++h) {
                        g_row[h] += v * d[h];
                    }
                }
            } else {
                const double* prev = state.acts[l - 1].data() + s * fan_in;
                for (std::size_t j = 0; j < fan_in; ++j) {
                    const double v = prev[j];
                    if (v == 0.0) {
                        continue;
                    }
                    double* g_row = gW.data() + j * fan_out;
                    for (std::size_t h = 0; h < fan_out; ++h) {
                        g_row[h] += v * d[h];
                    }
                }
            }
        }

        if (l == 1) {
            break;
        }
        // delta for layer l-1: (delta_l . W^T) * act'(a_{l-1})
        next_delta.assign(batch_n * fan_in, 0.0);
        for (std::size_t s = 0; s < batch_n; ++s) {
            const double* d = delta.data() + s * fan_out;
            const double* act = state.acts[l - 1].data() + s * fan_in;
            double* nd = next_delta.data() + s * fan_in;
            for (std::size_t j = 0; j < fan_in; ++j) {
                const double* w_row = W.data() + j * fan_out;
                double sum = 0.0;
                for (std::size_t h = 0; h < fan_out; ++h) {
                    sum += w_row[h] * d[h];
                }
                nd[j] = sum * activate_grad(model.params.activation, act[j]);
            }
        }
        delta.swap(next_delta);
    }
    return loss;
}

Gradients zero_gradients(const MlpModel& model) {
    Gradients grads;
    grads.weights.reserve(model.weights.size());
    grads.biases.reserve(model.biases.size());
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        grads.weights.emplace_back(model.weights[l].size(), 0.0);
        grads.biases.emplace_back(model.biases[l].size(), 0.0);
    }
    return grads;
}

}  // namespace

MlpModel init_model(std::size_t n_features, const MlpParams& params) {
    if (n_features < 1) {
        throw ConfigError("init_model: n_features must be >= 1");
    }
    params.validate();
    MlpModel model;
    model.params = params;
    model.layer_sizes.push_back(n_features);
    for (const std::size_t size : params.hidden_layers) {
        model.layer_sizes.push_back(size);
    }
    model.layer_sizes.push_back(1);

    Rng rng(params.seed);
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        const std::size_t fan_in = model.layer_sizes[l];
        const std::size_t fan_out = model.layer_sizes[l + 1];
        const double radius = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::vector<double> W(fan_in * fan_out);
        for (auto& w : W) {
            w = rng.uniform(-radius, radius);
        }
        model.weights.push_back(std::move(W));
        model.biases.emplace_back(fan_out, 0.0);
    }
    return model;
}

std::vector<double> forward(const MlpModel& model, const SparseMatrix& X) {
    if (X.cols() != model.n_features()) {
        throw DimensionError("forward: input has " + std::to_string(X.cols()) +
                             " features, model expects " + std::to_string(model.n_features()));
    }
    std::vector<std::size_t> all(X.rows());
    std::iota(all.begin(), all.end(), 0);
    BatchState state;
    forward_batch(model, X, all, state);
    std::vector<double> probs(X.rows());
    for (std::size_t s = 0; s < X.rows(); ++s) {
        const double p = logistic(state.acts.back()[s]);
        probs[s] = std::clamp(p, 1e-12, 1.0 - 1e-12);
    }
    return probs;
}

std::pair<double, Gradients> loss_and_grad(const MlpModel& model, const SparseMatrix& X,
                                           const std::vector<int>& y) {
    if (X.rows() != y.size()) {
        throw DimensionError("loss_and_grad: X rows and y length differ");
    }
    if (X.cols() != model.n_features()) {
        throw DimensionError("loss_and_grad: feature dimension mismatch");
    }
    std::vector<std::size_t> all(X.rows());
    std::iota(all.begin(), all.end(), 0);
    BatchState state;
    Gradients grads = zero_gradients(model);
    const double loss = backprop_batch(model, X, y, all, state, grads);
    return {loss, std::move(grads)};
}

MlpModel train_mlp(const SparseMatrix& X, const std::vector<int>& y, const MlpParams& params) {
    params.validate();
    if (X.rows() != y.size()) {
        throw DimensionError("train_mlp: X rows and y length differ");
    }
    if (X.rows() == 0) {
        throw ValidationError("train_mlp: empty training set");
    }
    const auto n_pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    if (n_pos == 0 || n_pos == y.size()) {
        throw ValidationError("train_mlp: both classes must be present in y");
    }

    MlpModel model = init_model(X.cols(), params);
    const std::size_t batch_size = std::min(params.batch_size, X.rows());

    Gradients velocity = zero_gradients(model);
    Gradients grads = zero_gradients(model);
    BatchState state;

    std::vector<std::size_t> order(X.rows());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(params.seed ^ 0x5bd1e995u);

    double lr = params.initial_lr;
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t no_improvement = 0;

    for (std::size_t epoch = 0; epoch < params.max_iter; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(start + batch_size, order.size());
            const std::span<const std::size_t> batch(order.data() + start, end - start);
            for (std::size_t l = 0; l < grads.weights.size(); ++l) {
                std::fill(grads.weights[l].begin(), grads.weights[l].end(), 0.0);
                std::fill(grads.biases[l].begin(), grads.biases[l].end(), 0.0);
            }
            const double batch_loss = backprop_batch(model, X, y, batch, state, grads);
            epoch_loss += batch_loss * static_cast<double>(batch.size());

            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                auto& W = model.weights[l];
                auto& vW = velocity.weights[l];
                const auto& gW = grads.weights[l];
                for (std::size_t i = 0; i < W.size(); ++i) {
                    vW[i] = params.momentum * vW[i] - lr * gW[i];
                    W[i] += vW[i];
                }
                auto& b = model.biases[l];
                auto& vb = velocity.biases[l];
                const auto& gb = grads.biases[l];
                for (std::size_t i = 0; i < b.size(); ++i) {
                    vb[i] = params.momentum * vb[i] - lr * gb[i];
                    b[i] += vb[i];
                }
            }
        }
        epoch_loss /= static_cast<double>(order.size());
        if (!std::isfinite(epoch_loss)) {
            throw DivergenceError("training diverged at epoch " + std::to_string(epoch + 1) +
                                  " (non-finite loss)");
        }
        model.loss_history.push_back(epoch_loss);

        // Two consecutive epochs without a tol-sized improvement trigger the
        // adaptive step-size cut.
        if (epoch_loss > best_loss - params.tol) {
            ++no_improvement;
        } else {
            no_improvement = 0;
        }
        best_loss = std::min(best_loss, epoch_loss);
        if (no_improvement >= 2) {
            if (params.learning_rate == LearningRatePolicy::Adaptive) {
                lr /= 5.0;
            }
            no_improvement = 0;
        }
    }
    return model;
}

std::vector<int> predict(const MlpModel& model, const SparseMatrix& X, double threshold) {
    const auto probs = forward(model, X);
    std::vector<int> labels(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        labels[i] = probs[i] >= threshold ? 1 : 0;
    }
    return labels;
}

}  // namespace ticketclass
