#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ticketclass/errors.hpp"
#include "ticketclass/mlp.hpp"
#include "ticketclass/rng.hpp"

using namespace ticketclass;

namespace {

// Small random classification problem with both classes present.
std::pair<SparseMatrix, std::vector<int>> random_problem(std::size_t n, std::size_t d,
                                                         std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> dense(n, std::vector<double>(d, 0.0));
    for (auto& row : dense) {
        for (auto& v : row) {
            if (rng.next_double() < 0.7) {
                v = rng.uniform(-1.0, 1.0);
            }
        }
    }
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = i % 2 == 0 ? 1 : 0;
    }
    return {SparseMatrix::from_dense(dense), y};
}

SparseMatrix xor_inputs() {
    return SparseMatrix::from_dense({{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}});
}

}  // namespace

TEST_CASE("init_model is deterministic and shapes line up") {
    MlpParams params;
    params.hidden_layers = {15, 9, 10, 11, 9, 15, 11};
    params.seed = 3;
    const MlpModel a = init_model(37362, params);
    const MlpModel b = init_model(37362, params);
    CHECK(a == b);
    REQUIRE(a.weights.size() == 8);
    REQUIRE(a.layer_sizes.size() == 9);
    CHECK(a.layer_sizes.front() == 37362);
    CHECK(a.layer_sizes.back() == 1);
    for (std::size_t l = 0; l + 1 < a.layer_sizes.size(); ++l) {
        CHECK(a.weights[l].size() == a.layer_sizes[l] * a.layer_sizes[l + 1]);
        CHECK(a.biases[l].size() == a.layer_sizes[l + 1]);
    }
}

TEST_CASE("no hidden layers degenerates to logistic regression shapes") {
    MlpParams params;
    params.hidden_layers = {};
    const MlpModel model = init_model(4, params);
    REQUIRE(model.weights.size() == 1);
    CHECK(model.weights[0].size() == 4);
}

TEST_CASE("zero weights produce probability one half") {
    MlpParams params;
    params.hidden_layers = {3};
    MlpModel model = init_model(2, params);
    for (auto& W : model.weights) {
        std::fill(W.begin(), W.end(), 0.0);
    }
    for (const double p : forward(model, xor_inputs())) {
        CHECK(p == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("single-layer model computes logistic(w.x)") {
    MlpParams params;
    params.hidden_layers = {};
    MlpModel model = init_model(2, params);
    model.weights[0] = {0.8, -0.4};
    model.biases[0] = {0.1};
    const auto X = SparseMatrix::from_dense({{1.0, 2.0}});
    const double z = 0.8 * 1.0 - 0.4 * 2.0 + 0.1;
    CHECK(forward(model, X).front() ==
          doctest::Approx(1.0 / (1.0 + std::exp(-z))).epsilon(1e-12));
}

TEST_CASE("forward matches a dense reference network") {
    MlpParams params;
    params.hidden_layers = {5, 3};
    params.seed = 12;
    const MlpModel model = init_model(4, params);
    const auto [X, y] = random_problem(6, 4, 99);
    const auto dense = X.to_dense();
    const auto probs = forward(model, X);
    for (std::size_t i = 0; i < dense.size(); ++i) {
        // naive per-layer evaluation
        std::vector<double> act = dense[i];
        for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
            const std::size_t fan_out = model.layer_sizes[l + 1];
            std::vector<double> next(fan_out, 0.0);
            for (std::size_t h = 0; h < fan_out; ++h) {
                double z = model.biases[l][h];
                for (std::size_t j = 0; j < act.size(); ++j) {
                    z += act[j] * model.weights[l][j * fan_out + h];
                }
                next[h] = l + 2 == model.layer_sizes.size() ? z : std::tanh(z);
            }
            act = next;
        }
        const double expected = 1.0 / (1.0 + std::exp(-act.front()));
        CHECK(probs[i] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("probability one half costs ln 2") {
    MlpParams params;
    params.hidden_layers = {2};
    MlpModel model = init_model(2, params);
    for (auto& W : model.weights) {
        std::fill(W.begin(), W.end(), 0.0);
    }
    const auto X = xor_inputs();
    const std::vector<int> y{0, 1, 1, 0};
    const auto [loss, grads] = loss_and_grad(model, X, y);
    CHECK(loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("confident correct predictions drive the loss toward zero") {
    MlpParams params;
    params.hidden_layers = {};
    MlpModel model = init_model(1, params);
    model.weights[0] = {20.0};
    model.biases[0] = {-10.0};
    const auto X = SparseMatrix::from_dense({{1.0}, {0.0}});
    const std::vector<int> y{1, 0};
    const auto [loss, grads] = loss_and_grad(model, X, y);
    CHECK(loss < 1e-4);
}

TEST_CASE("backprop matches central finite differences") {
    for (const auto activation : {Activation::Tanh, Activation::Logistic}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            MlpParams params;
            params.hidden_layers = {6, 4};
            params.activation = activation;
            params.seed = seed;
            const MlpModel model = init_model(5, params);
            const auto [X, y] = random_problem(12, 5, seed + 100);
            const auto [loss, grads] = loss_and_grad(model, X, y);
            const auto fd = oracle::fd_gradients(model, X, y);
            CHECK(oracle::max_gradient_error(grads, fd) < 1e-4);
        }
    }
}

TEST_CASE("relu backprop matches finite differences away from kinks") {
    MlpParams params;
    params.hidden_layers = {4};
    params.activation = Activation::Relu;
    params.seed = 7;
    const MlpModel model = init_model(3, params);
    const auto [X, y] = random_problem(10, 3, 512);
    const auto [loss, grads] = loss_and_grad(model, X, y);
    const auto fd = oracle::fd_gradients(model, X, y);
    CHECK(oracle::max_gradient_error(grads, fd) < 1e-4);
}

TEST_CASE("training solves xor for at least one seed") {
    const auto X = xor_inputs();
    const std::vector<int> y{0, 1, 1, 0};
    bool solved = false;
    for (const std::uint64_t seed : {0ULL, 1ULL, 2ULL}) {
        MlpParams params;
        params.hidden_layers = {8};
        params.max_iter = 100;
        params.initial_lr = 0.5;
        params.batch_size = 4;
        params.seed = seed;
        const MlpModel model = train_mlp(X, y, params);
        if (predict(model, X) == y) {
            solved = true;
            break;
        }
    }
    CHECK(solved);
}

TEST_CASE("linearly separable blobs train to F1 1.0") {
    Rng rng(77);
    std::vector<std::vector<double>> dense;
    std::vector<int> y;
    for (int i = 0; i < 30; ++i) {
        const bool positive = i % 2 == 0;
        const double cx = positive ? 3.0 : -3.0;
        dense.push_back({cx + rng.uniform(-0.5, 0.5), cx + rng.uniform(-0.5, 0.5)});
        y.push_back(positive ? 1 : 0);
    }
    MlpParams params;
    params.hidden_layers = {8};
    params.max_iter = 60;
    params.initial_lr = 0.1;
    params.seed = 0;
    const MlpModel model = train_mlp(SparseMatrix::from_dense(dense), y, params);
    CHECK(predict(model, SparseMatrix::from_dense(dense)) == y);
}

TEST_CASE("single-class training is rejected") {
    const auto X = SparseMatrix::from_dense({{1.0}, {2.0}});
    CHECK_THROWS_AS(train_mlp(X, {1, 1}, MlpParams{}), ValidationError);
}

TEST_CASE("an absurd learning rate raises a divergence error with the epoch") {
    const auto [X, y] = random_problem(16, 3, 5);
    MlpParams params;
    params.hidden_layers = {6};
    // Unbounded activations let the blow-up compound across layers.
    params.activation = Activation::Relu;
    params.initial_lr = 1e18;
    params.learning_rate = LearningRatePolicy::Constant;
    params.max_iter = 50;
    try {
        train_mlp(X, y, params);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }
}

TEST_CASE("probabilities stay strictly inside (0, 1) even for saturated logits") {
    MlpParams params;
    params.hidden_layers = {};
    MlpModel model = init_model(1, params);
    model.weights[0] = {1e6};
    model.biases[0] = {0.0};
    const auto X = SparseMatrix::from_dense({{1.0}, {-1.0}});
    const auto probs = forward(model, X);
    CHECK(probs[0] < 1.0);
    CHECK(probs[0] > 0.0);
    CHECK(probs[1] > 0.0);
    CHECK(probs[1] < 1.0);
}

TEST_CASE("prediction threshold resolves ties to BUG") {
    MlpParams params;
    params.hidden_layers = {};
    MlpModel model = init_model(1, params);
    model.weights[0] = {0.0};
    model.biases[0] = {0.0};
    const auto X = SparseMatrix::from_dense({{1.0}});
    CHECK(predict(model, X) == std::vector<int>{1});  // p = 0.5 exactly
}

TEST_CASE("predict agrees with argmax of (1-p, p)") {
    Rng rng(31);
    MlpParams params;
    params.hidden_layers = {5};
    params.seed = 8;
    const MlpModel model = init_model(4, params);
    const auto [X, y] = random_problem(1000, 4, 14);
    const auto probs = forward(model, X);
    const auto labels = predict(model, X);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const int argmax = probs[i] >= 1.0 - probs[i] ? 1 : 0;
        CHECK(labels[i] == argmax);
    }
}

TEST_CASE("training is deterministic in the seed") {
    const auto [X, y] = random_problem(24, 6, 44);
    MlpParams params;
    params.hidden_layers = {7};
    params.max_iter = 20;
    params.seed = 123;
    const MlpModel a = train_mlp(X, y, params);
    const MlpModel b = train_mlp(X, y, params);
    CHECK(a == b);
    CHECK(predict(a, X) == predict(b, X));
}

TEST_CASE("full-batch constant-rate loss is non-increasing early on") {
    const auto [X, y] = random_problem(20, 4, 67);
    MlpParams params;
    params.hidden_layers = {5};
    params.learning_rate = LearningRatePolicy::Constant;
    params.initial_lr = 1e-3;
    params.momentum = 0.0;
    params.batch_size = 1000;  // full batch
    params.max_iter = 5;
    params.seed = 2;
    const MlpModel model = train_mlp(X, y, params);
    REQUIRE(model.loss_history.size() == 5);
    for (std::size_t e = 1; e < model.loss_history.size(); ++e) {
        CHECK(model.loss_history[e] <= model.loss_history[e - 1] + 1e-12);
    }
}

TEST_CASE("forward output is invariant under row permutations") {
    MlpParams params;
    params.hidden_layers = {6};
    params.seed = 4;
    const MlpModel model = init_model(5, params);
    const auto [X, y] = random_problem(9, 5, 90);
    std::vector<std::size_t> perm{4, 1, 8, 0, 2, 7, 3, 6, 5};
    const auto direct = forward(model, X.select_rows(perm));
    const auto full = forward(model, X);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        CHECK(direct[i] == full[perm[i]]);
    }
}
