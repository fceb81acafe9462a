#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ticketclass/sparse.hpp"

namespace ticketclass {

enum class Activation : std::uint8_t { Tanh = 0, Relu = 1, Logistic = 2 };
enum class LearningRatePolicy : std::uint8_t { Constant = 0, Adaptive = 1 };

const char* to_string(Activation a);
const char* to_string(LearningRatePolicy p);
Activation activation_from_string(const std::string& s);
LearningRatePolicy lr_policy_from_string(const std::string& s);

struct MlpParams {
    std::vector<std::size_t> hidden_layers{100};
    Activation activation = Activation::Tanh;
    LearningRatePolicy learning_rate = LearningRatePolicy::Adaptive;
    double initial_lr = 1e-3;
    double momentum = 0.9;
    std::size_t max_iter = 100;    // epochs
    std::size_t batch_size = 200;  // clamped to n_samples
    double tol = 1e-4;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const MlpParams&) const = default;
};

// Feed-forward network: input -> hidden layers -> single logistic output.
// weights[l] is fan_in x fan_out, row-major; biases[l] has fan_out entries.
struct MlpModel {
    std::vector<std::size_t> layer_sizes;  // input, hidden..., 1
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    MlpParams params;
    std::vector<double> loss_history;  // per-epoch training loss

    std::size_t n_features() const { return layer_sizes.front(); }
    bool operator==(const MlpModel&) const = default;
};

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

// Uniform(-r, r) weights with r = sqrt(6 / (fan_in + fan_out)), zero biases.
// Fully determined by params.seed.
MlpModel init_model(std::size_t n_features, const MlpParams& params);

// Bug probability per row, strictly inside (0, 1).
std::vector<double> forward(const MlpModel& model, const SparseMatrix& X);

// Mean binary cross-entropy and its gradients via backpropagation.
std::pair<double, Gradients> loss_and_grad(const MlpModel& model, const SparseMatrix& X,
                                           const std::vector<int>& y);

// Mini-batch gradient descent with momentum. The adaptive policy divides the
// learning rate by 5 whenever two consecutive epochs fail to improve the best
// loss by tol. Throws DivergenceError if the loss turns non-finite.
MlpModel train_mlp(const SparseMatrix& X, const std::vector<int>& y, const MlpParams& params);

// BUG (1) iff probability >= threshold.
std::vector<int> predict(const MlpModel& model, const SparseMatrix& X, double threshold = 0.5);

}  // namespace ticketclass
