#pragma once

#include <string>

#include "ticketclass/classifiers.hpp"
#include "ticketclass/feature_selection.hpp"
#include "ticketclass/sparse.hpp"
#include "ticketclass/text.hpp"

namespace ticketclass {

// Sparse matrices travel as a sorted triplet text file:
//   line 1: "ticketclass-matrix <version>"
//   line 2: "<rows> <cols> <nnz>"
//   then one "<row> <col> <value>" per entry, sorted by (row, col).
// Values are printed with 17 significant digits so doubles round-trip exactly.
void save_matrix(const SparseMatrix& matrix, const std::string& path);
SparseMatrix load_matrix(const std::string& path);

// Fitted vectorizer as a versioned JSON file embedding the pipeline config,
// the term list, document frequencies and idf weights.
void save_tfidf(const TfidfModel& model, const std::string& path);
TfidfModel load_tfidf(const std::string& path);

// Versioned binary container, little-endian, tagged by classifier kind.
// Loading validates magic, version and tensor shape consistency.
void save_classifier(const TrainedClassifier& model, const std::string& path);
TrainedClassifier load_classifier(const std::string& path);

// Self-contained deployment artifact: vectorizer + feature mask + MLP.
struct ModelBundle {
    TfidfModel tfidf;
    FeatureMask mask;
    MlpModel mlp;
    std::string model_version;
};

void save_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle load_bundle(const std::string& path);

}  // namespace ticketclass
