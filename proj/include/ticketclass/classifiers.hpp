#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ticketclass/mlp.hpp"
#include "ticketclass/sparse.hpp"

namespace ticketclass {

enum class ClassifierKind : std::uint8_t { Mlp = 0, Sgd = 1, Ridge = 2, Knn = 3 };
enum class SgdLoss : std::uint8_t { Logistic = 0, ModifiedHuber = 1 };
enum class KnnWeighting : std::uint8_t { Uniform = 0, Distance = 1 };

const char* to_string(ClassifierKind k);
ClassifierKind classifier_kind_from_string(const std::string& s);

struct SgdParams {
    SgdLoss loss = SgdLoss::ModifiedHuber;
    std::size_t max_iter = 5000;
    double initial_lr = 0.01;
    double alpha = 1e-4;  // L2 penalty
    std::uint64_t seed = 0;
};

struct RidgeParams {
    double alpha = 1.0;
    bool fit_intercept = true;
    std::uint64_t seed = 0;
};

struct KnnParams {
    std::size_t n_neighbors = 2;
    KnnWeighting weighting = KnnWeighting::Distance;
};

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::Mlp;
    MlpParams mlp;
    SgdParams sgd;
    RidgeParams ridge;
    KnnParams knn;

    std::string name() const { return to_string(kind); }
    void validate() const;
};

// Linear decision function w.x + b; predicts BUG when the score is >= 0.
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    bool operator==(const LinearModel&) const = default;
};

// Stores the training set; prediction votes over the nearest neighbors by
// Euclidean distance, ties at the k-th distance are all included.
struct KnnModel {
    SparseMatrix train;
    std::vector<int> labels;
    KnnParams params;
};

class TrainedClassifier {
public:
    static TrainedClassifier train(const ClassifierSpec& spec, const SparseMatrix& X,
                                   const std::vector<int>& y);

    std::vector<int> predict(const SparseMatrix& X) const;
    ClassifierKind kind() const { return kind_; }

    const MlpModel& mlp() const;
    const LinearModel& linear() const;
    const KnnModel& knn() const;
    const ClassifierSpec& spec() const { return spec_; }

    // model_io needs to reassemble classifiers from disk
    static TrainedClassifier from_parts(ClassifierSpec spec,
                                        std::variant<MlpModel, LinearModel, KnnModel> model);

private:
    TrainedClassifier() = default;
    ClassifierKind kind_ = ClassifierKind::Mlp;
    ClassifierSpec spec_;
    std::variant<MlpModel, LinearModel, KnnModel> model_;
};

// Free-function aliases over the common contract.
TrainedClassifier train_baseline(const ClassifierSpec& spec, const SparseMatrix& X,
                                 const std::vector<int>& y);
std::vector<int> predict_baseline(const TrainedClassifier& model, const SparseMatrix& X);

}  // namespace ticketclass
