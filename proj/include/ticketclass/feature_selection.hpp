#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ticketclass/sparse.hpp"

namespace ticketclass {

struct ClassifierSpec;  // classifiers.hpp

// Top-k feature choice by chi-square score. `selected` holds original column
// indices, strictly increasing; `scores` aligns with `selected`.
struct FeatureMask {
    std::vector<std::uint32_t> selected;
    std::size_t k = 0;
    std::vector<double> scores;
};

// Chi-square association between per-class feature mass and class priors:
// chi2_j = sum_c (O_c - E_c)^2 / E_c with O_c the feature's value mass over
// class c and E_c = total mass * class prior. Features with zero mass score 0.
std::vector<double> chi2_scores(const SparseMatrix& X, const std::vector<int>& y);

// Indices of the k largest scores; ties break toward the lower index.
FeatureMask select_top_k(const std::vector<double>& scores, std::size_t k);

// Columns reindexed densely in mask order; values unchanged.
SparseMatrix apply_mask(const SparseMatrix& X, const FeatureMask& mask);

struct SweepRow {
    std::size_t k = 0;           // clamped feature count actually used
    std::size_t requested_k = 0;
    std::string classifier;
    double mean_f1 = 0.0;
    double ci95_half = 0.0;
};

// For each feature count in `grid`, scores every classifier by k-fold F1.
// Counts above the available feature number are clamped with a warning row.
std::vector<SweepRow> sweep_feature_counts(const SparseMatrix& X, const std::vector<int>& y,
                                           const std::vector<std::size_t>& grid,
                                           const std::vector<ClassifierSpec>& classifiers,
                                           int folds, std::uint64_t seed);

std::string sweep_to_tsv(const std::vector<SweepRow>& rows);

}  // namespace ticketclass
