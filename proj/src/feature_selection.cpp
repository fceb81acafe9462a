#include "ticketclass/feature_selection.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <sstream>

#include "ticketclass/classifiers.hpp"
#include "ticketclass/errors.hpp"
#include "ticketclass/evaluation.hpp"

namespace ticketclass {

std::vector<double> chi2_scores(const SparseMatrix& X, const std::vector<int>& y) {
    if (X.rows() != y.size()) {
        throw DimensionError("chi2_scores: X rows and y length differ");
    }
    std::size_t n_pos = 0;
    for (const int label : y) {
        if (label != 0 && label != 1) {
            throw ValidationError("chi2_scores: labels must be 0 or 1");
        }
        n_pos += static_cast<std::size_t>(label);
    }
    if (n_pos == 0 || n_pos == y.size()) {
        throw ValidationError("chi2_scores: both classes must be present");
    }

    // Per-class value mass for every feature.
    std::vector<double> mass_pos(X.cols(), 0.0);
    std::vector<double> mass_neg(X.cols(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        auto& mass = y[i] == 1 ? mass_pos : mass_neg;
        const auto cols = X.row_cols(i);
        const auto vals = X.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (vals[k] < 0.0) {
                throw ValidationError("chi2_scores: feature values must be nonnegative");
            }
            mass[cols[k]] += vals[k];
        }
    }

    const double prior_pos = static_cast<double>(n_pos) / static_cast<double>(y.size());
    const double prior_neg = 1.0 - prior_pos;
    std::vector<double> scores(X.cols(), 0.0);
    for (std::size_t j = 0; j < X.cols(); ++j) {
        const double total = mass_pos[j] + mass_neg[j];
        if (total == 0.0) {
            continue;
        }
        const double expected_pos = total * prior_pos;
        const double expected_neg = total * prior_neg;
        const double d_pos = mass_pos[j] - expected_pos;
        const double d_neg = mass_neg[j] - expected_neg;
        scores[j] = d_pos * d_pos / expected_pos + d_neg * d_neg / expected_neg;
    }
    return scores;
}

FeatureMask select_top_k(const std::vector<double>& scores, std::size_t k) {
    if (k < 1) {
        throw ConfigError("select_top_k: k must be >= 1");
    }
    std::vector<std::uint32_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
    });
    const std::size_t take = std::min(k, scores.size());
    order.resize(take);
    std::sort(order.begin(), order.end());

    FeatureMask mask;
    mask.k = k;
    mask.selected = std::move(order);
    mask.scores.reserve(take);
    for (const auto col : mask.selected) {
        mask.scores.push_back(scores[col]);
    }
    return mask;
}

SparseMatrix apply_mask(const SparseMatrix& X, const FeatureMask& mask) {
    // Old column -> new column; mask.selected is strictly increasing.
    std::vector<std::int64_t> remap(X.cols(), -1);
    for (std::size_t new_col = 0; new_col < mask.selected.size(); ++new_col) {
        if (mask.selected[new_col] >= X.cols()) {
            throw DimensionError("apply_mask: mask index out of range");
        }
        remap[mask.selected[new_col]] = static_cast<std::int64_t>(new_col);
    }
    SparseMatrix out(0, mask.selected.size());
    std::vector<SparseMatrix::Entry> entries;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto cols = X.row_cols(i);
        const auto vals = X.row_values(i);
        entries.clear();
        for (std::size_t n = 0; n < cols.size(); ++n) {
            if (remap[cols[n]] >= 0) {
                entries.push_back({static_cast<std::uint32_t>(remap[cols[n]]), vals[n]});
            }
        }
        out.append_row(entries);
    }
    return out;
}

std::vector<SweepRow> sweep_feature_counts(const SparseMatrix& X, const std::vector<int>& y,
                                           const std::vector<std::size_t>& grid,
                                           const std::vector<ClassifierSpec>& classifiers,
                                           int folds, std::uint64_t seed) {
    const auto splits = stratified_kfold(y, folds, seed);
    for (const std::size_t requested : grid) {
        if (requested > X.cols()) {
            std::cerr << "warning: sweep k=" << requested << " clamped to " << X.cols()
                      << " available features\n";
        }
    }

    // Selection happens inside each training fold; the chi-square scores per
    // fold are shared across the whole k grid.
    std::vector<std::vector<std::vector<double>>> fold_f1(
        grid.size(), std::vector<std::vector<double>>(classifiers.size()));
    for (const auto& [train_idx, test_idx] : splits) {
        const SparseMatrix train_X = X.select_rows(train_idx);
        const SparseMatrix test_X = X.select_rows(test_idx);
        const auto train_y = subset(y, train_idx);
        const auto test_y = subset(y, test_idx);
        const auto scores = chi2_scores(train_X, train_y);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const auto mask = select_top_k(scores, grid[g]);
            const SparseMatrix train_sel = apply_mask(train_X, mask);
            const SparseMatrix test_sel = apply_mask(test_X, mask);
            for (std::size_t c = 0; c < classifiers.size(); ++c) {
                const auto model = TrainedClassifier::train(classifiers[c], train_sel, train_y);
                fold_f1[g][c].push_back(compute_metrics(test_y, model.predict(test_sel)).f1);
            }
        }
    }

    std::vector<SweepRow> rows;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (std::size_t c = 0; c < classifiers.size(); ++c) {
            const auto [mean, half] = ci95(fold_f1[g][c]);
            rows.push_back({std::min(grid[g], X.cols()), grid[g], classifiers[c].name(), mean,
                            half});
        }
    }
    return rows;
}

std::string sweep_to_tsv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "k\trequested_k\tclassifier\tmean_f1\tci95_half\n";
    out.setf(std::ios::fixed);
    out.precision(6);
    for (const auto& row : rows) {
        out << row.k << '\t' << row.requested_k << '\t' << row.classifier << '\t' << row.mean_f1
            << '\t' << row.ci95_half << '\n';
    }
    return out.str();
}

}  // namespace ticketclass
