#include "ticketclass/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ticketclass/errors.hpp"
#include "ticketclass/rng.hpp"

namespace ticketclass {

const char* to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::Mlp: return "mlp";
        case ClassifierKind::Sgd: return "sgd";
        case ClassifierKind::Ridge: return "ridge";
        case ClassifierKind::Knn: return "knn";
    }
    return "mlp";
}

ClassifierKind classifier_kind_from_string(const std::string& s) {
    if (s == "mlp") return ClassifierKind::Mlp;
    if (s == "sgd") return ClassifierKind::Sgd;
    if (s == "ridge") return ClassifierKind::Ridge;
    if (s == "knn") return ClassifierKind::Knn;
    throw ConfigError("unknown classifier kind \"" + s + "\"");
}

void ClassifierSpec::validate() const {
    switch (kind) {
        case ClassifierKind::Mlp:
            mlp.validate();
            break;
        case ClassifierKind::Sgd:
            if (sgd.max_iter < 1) throw ConfigError("sgd.max_iter must be >= 1");
            if (sgd.initial_lr <= 0) throw ConfigError("sgd.initial_lr must be positive");
            if (sgd.alpha < 0) throw ConfigError("sgd.alpha must be nonnegative");
            break;
        case ClassifierKind::Ridge:
            if (ridge.alpha <= 0) throw ConfigError("ridge.alpha must be positive");
            break;
        case ClassifierKind::Knn:
            if (knn.n_neighbors < 1) throw ConfigError("knn.n_neighbors must be >= 1");
            break;
    }
}

namespace {

void require_both_classes(const std::vector<int>& y) {
    const auto n_pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    if (n_pos == 0 || n_pos == y.size()) {
        throw ValidationError("training labels must contain both classes");
    }
}

double sparse_dot_dense(const SparseMatrix& X, std::size_t row, const std::vector<double>& w) {
    const auto cols = X.row_cols(row);
    const auto vals = X.row_values(row);
    double dot = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        dot += vals[k] * w[cols[k]];
    }
    return dot;
}

// ---- SGD linear classifier ----

LinearModel train_sgd(const SgdParams& params, const SparseMatrix& X, const std::vector<int>& y) {
    // Weights kept as scale * values so the L2 decay stays O(nnz) per sample.
    std::vector<double> v(X.cols(), 0.0);
    double scale = 1.0;
    double bias = 0.0;

    std::vector<std::size_t> order(X.rows());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(params.seed ^ 0x9e3779b9u);

    const double lr = params.initial_lr;
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t stale_epochs = 0;

    for (std::size_t epoch = 0; epoch < params.max_iter; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (const std::size_t i : order) {
            const double target = y[i] == 1 ? 1.0 : -1.0;
            const double score = scale * sparse_dot_dense(X, i, v) + bias;
            const double margin = target * score;

            double dloss_dscore = 0.0;
            if (params.loss == SgdLoss::Logistic) {
                epoch_loss += std::log1p(std::exp(-margin));
                dloss_dscore = -target / (1.0 + std::exp(margin));
            } else {  // modified huber: squared hinge with a linear tail
                if (margin >= 1.0) {
                    dloss_dscore = 0.0;
                } else if (margin >= -1.0) {
                    epoch_loss += (1.0 - margin) * (1.0 - margin);
                    dloss_dscore = -2.0 * (1.0 - margin) * target;
                } else {
                    epoch_loss += -4.0 * margin;
                    dloss_dscore = -4.0 * target;
                }
            }

            if (params.alpha > 0.0) {
                scale *= 1.0 - lr * params.alpha;
                if (scale < 1e-9) {
                    for (auto& w : v) {
                        w *= scale;
                    }
                    scale = 1.0;
                }
            }
            if (dloss_dscore != 0.0) {
                const auto cols = X.row_cols(i);
                const auto vals = X.row_values(i);
                const double step = lr * dloss_dscore / scale;
                for (std::size_t k = 0; k < cols.size(); ++k) {
                    v[cols[k]] -= step * vals[k];
                }
                bias -= lr * dloss_dscore;
            }
        }
        epoch_loss /= static_cast<double>(X.rows());
        if (!std::isfinite(epoch_loss)) {
            throw DivergenceError("sgd training diverged at epoch " + std::to_string(epoch + 1));
        }
        if (epoch_loss > best_loss - 1e-6) {
            if (++stale_epochs >= 5) {
                break;
            }
        } else {
            stale_epochs = 0;
        }
        best_loss = std::min(best_loss, epoch_loss);
    }

    LinearModel model;
    model.weights.resize(X.cols());
    for (std::size_t j = 0; j < X.cols(); ++j) {
        model.weights[j] = scale * v[j];
    }
    model.bias = bias;
    return model;
}

// ---- Ridge regression on +/-1 targets ----

// Conjugate gradients on the normal equations of min ||Xw + b - t||^2 + a||w||^2.
// The intercept is an extra unpenalized coordinate.
LinearModel train_ridge(const RidgeParams& params, const SparseMatrix& X,
                        const std::vector<int>& y) {
    const std::size_t dim = X.cols() + (params.fit_intercept ? 1 : 0);
    const std::size_t n = X.rows();

    auto apply = [&](const std::vector<double>& p, std::vector<double>& out) {
        // r = X p_w + p_b
        std::vector<double> r(n, params.fit_intercept ? p[X.cols()] : 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] += sparse_dot_dense(X, i, p);
        }
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto cols = X.row_cols(i);
            const auto vals = X.row_values(i);
            for (std::size_t k = 0; k < cols.size(); ++k) {
                out[cols[k]] += vals[k] * r[i];
            }
            if (params.fit_intercept) {
                out[X.cols()] += r[i];
            }
        }
        for (std::size_t j = 0; j < X.cols(); ++j) {
            out[j] += params.alpha * p[j];
        }
    };

    // rhs = [X^T t; 1^T t]
    std::vector<double> rhs(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double target = y[i] == 1 ? 1.0 : -1.0;
        const auto cols = X.row_cols(i);
        const auto vals = X.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            rhs[cols[k]] += vals[k] * target;
        }
        if (params.fit_intercept) {
            rhs[X.cols()] += target;
        }
    }

    std::vector<double> w(dim, 0.0), residual = rhs, direction = rhs, applied(dim);
    double rs_old = std::inner_product(residual.begin(), residual.end(), residual.begin(), 0.0);
    const double rhs_norm = std::sqrt(rs_old);
    const double tolerance = std::max(1e-14, 1e-12 * rhs_norm);
    const std::size_t max_cg = std::max<std::size_t>(2 * dim, 200);
    for (std::size_t iter = 0; iter < max_cg && std::sqrt(rs_old) > tolerance; ++iter) {
        apply(direction, applied);
        const double denom =
            std::inner_product(direction.begin(), direction.end(), applied.begin(), 0.0);
        if (denom <= 0.0) {
            break;  // numerically exhausted
        }
        const double step = rs_old / denom;
        for (std::size_t j = 0; j < dim; ++j) {
            w[j] += step * direction[j];
            residual[j] -= step * applied[j];
        }
        const double rs_new =
            std::inner_product(residual.begin(), residual.end(), residual.begin(), 0.0);
        const double beta = rs_new / rs_old;
        for (std::size_t j = 0; j < dim; ++j) {
            direction[j] = residual[j] + beta * direction[j];
        }
        rs_old = rs_new;
    }

    LinearModel model;
    model.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(X.cols()));
    model.bias = params.fit_intercept ? w[X.cols()] : 0.0;
    return model;
}

// ---- k nearest neighbors ----

std::vector<int> predict_knn(const KnnModel& model, const SparseMatrix& X) {
    const std::size_t n_train = model.train.rows();
    const std::size_t k = std::min(model.params.n_neighbors, n_train);

    std::vector<double> train_norms(n_train, 0.0);
    for (std::size_t t = 0; t < n_train; ++t) {
        for (const double v : model.train.row_values(t)) {
            train_norms[t] += v * v;
        }
    }

    std::vector<int> out(X.rows(), 0);
    std::vector<std::pair<double, std::size_t>> dist(n_train);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto icols = X.row_cols(i);
        const auto ivals = X.row_values(i);
        double self = 0.0;
        for (const double v : ivals) {
            self += v * v;
        }
        for (std::size_t t = 0; t < n_train; ++t) {
            const auto tcols = model.train.row_cols(t);
            const auto tvals = model.train.row_values(t);
            double dot = 0.0;
            std::size_t a = 0, b = 0;
            while (a < icols.size() && b < tcols.size()) {
                if (icols[a] == tcols[b]) {
                    dot += ivals[a] * tvals[b];
                    ++a;
                    ++b;
                } else if (icols[a] < tcols[b]) {
                    ++a;
                } else {
                    ++b;
                }
            }
            dist[t] = {std::max(0.0, self + train_norms[t] - 2.0 * dot), t};
        }
        std::sort(dist.begin(), dist.end());
        // Expand the neighborhood over exact distance ties at the k-th place,
        // so predictions do not depend on training row order.
        const double boundary = dist[k - 1].first;
        std::size_t count = k;
        while (count < n_train && dist[count].first == boundary) {
            ++count;
        }

        double vote_pos = 0.0, vote_neg = 0.0;
        // Under distance weighting an exact match (distance 0) takes the whole
        // vote; under uniform weighting it is just another neighbor.
        bool exact_match = false;
        if (model.params.weighting == KnnWeighting::Distance) {
            for (std::size_t m = 0; m < count; ++m) {
                if (dist[m].first == 0.0) {
                    exact_match = true;
                    break;
                }
            }
        }
        for (std::size_t m = 0; m < count; ++m) {
            const auto [d2, t] = dist[m];
            double weight = 1.0;
            if (exact_match) {
                // Zero-distance neighbors dominate the vote outright.
                if (d2 != 0.0) {
                    continue;
                }
            } else if (model.params.weighting == KnnWeighting::Distance) {
                weight = 1.0 / std::sqrt(d2);
            }
            (model.labels[t] == 1 ? vote_pos : vote_neg) += weight;
        }
        out[i] = vote_pos >= vote_neg ? 1 : 0;
    }
    return out;
}

}  // namespace

TrainedClassifier TrainedClassifier::train(const ClassifierSpec& spec, const SparseMatrix& X,
                                           const std::vector<int>& y) {
    spec.validate();
    if (X.rows() != y.size()) {
        throw DimensionError("classifier training: X rows and y length differ");
    }
    require_both_classes(y);

    TrainedClassifier out;
    out.kind_ = spec.kind;
    out.spec_ = spec;
    switch (spec.kind) {
        case ClassifierKind::Mlp:
            out.model_ = train_mlp(X, y, spec.mlp);
            break;
        case ClassifierKind::Sgd:
            out.model_ = train_sgd(spec.sgd, X, y);
            break;
        case ClassifierKind::Ridge:
            out.model_ = train_ridge(spec.ridge, X, y);
            break;
        case ClassifierKind::Knn:
            out.model_ = KnnModel{X, y, spec.knn};
            break;
    }
    return out;
}

std::vector<int> TrainedClassifier::predict(const SparseMatrix& X) const {
    if (std::holds_alternative<MlpModel>(model_)) {
        return ticketclass::predict(std::get<MlpModel>(model_), X);
    }
    if (std::holds_alternative<LinearModel>(model_)) {
        const auto& linear = std::get<LinearModel>(model_);
        if (X.cols() != linear.weights.size()) {
            throw DimensionError("predict: feature dimension mismatch");
        }
        std::vector<int> out(X.rows());
        for (std::size_t i = 0; i < X.rows(); ++i) {
            const double score = sparse_dot_dense(X, i, linear.weights) + linear.bias;
            out[i] = score >= 0.0 ? 1 : 0;  // ties resolve to BUG
        }
        return out;
    }
    const auto& knn = std::get<KnnModel>(model_);
    if (X.cols() != knn.train.cols()) {
        throw DimensionError("predict: feature dimension mismatch");
    }
    return predict_knn(knn, X);
}

const MlpModel& TrainedClassifier::mlp() const {
    if (!std::holds_alternative<MlpModel>(model_)) {
        throw ValidationError("classifier does not hold an MLP model");
    }
    return std::get<MlpModel>(model_);
}

const LinearModel& TrainedClassifier::linear() const {
    if (!std::holds_alternative<LinearModel>(model_)) {
        throw ValidationError("classifier does not hold a linear model");
    }
    return std::get<LinearModel>(model_);
}

const KnnModel& TrainedClassifier::knn() const {
    if (!std::holds_alternative<KnnModel>(model_)) {
        throw ValidationError("classifier does not hold a knn model");
    }
    return std::get<KnnModel>(model_);
}

TrainedClassifier TrainedClassifier::from_parts(
    ClassifierSpec spec, std::variant<MlpModel, LinearModel, KnnModel> model) {
    TrainedClassifier out;
    out.kind_ = spec.kind;
    out.spec_ = std::move(spec);
    out.model_ = std::move(model);
    return out;
}

TrainedClassifier train_baseline(const ClassifierSpec& spec, const SparseMatrix& X,
                                 const std::vector<int>& y) {
    return TrainedClassifier::train(spec, X, y);
}

std::vector<int> predict_baseline(const TrainedClassifier& model, const SparseMatrix& X) {
    return model.predict(X);
}

}  // namespace ticketclass
