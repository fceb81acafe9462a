#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ticketclass/classifiers.hpp"
#include "ticketclass/sparse.hpp"

namespace ticketclass {

using ParamValue = std::variant<std::int64_t, double, std::string>;
std::string param_value_to_string(const ParamValue& value);

// Discrete candidate values per parameter name. std::map keeps enumeration
// order independent of insertion order.
using ParamGrid = std::map<std::string, std::vector<ParamValue>>;

using ParamAssignment = std::vector<std::pair<std::string, ParamValue>>;
std::string assignment_to_string(const ParamAssignment& assignment);

// Every combination, parameters in lexicographic name order, the last
// parameter cycling fastest. The empty grid yields one empty assignment.
std::vector<ParamAssignment> cartesian(const ParamGrid& grid);

// Applies an assignment onto a default spec of the given kind; unknown
// parameter names throw ConfigError.
ClassifierSpec spec_from_assignment(ClassifierKind kind, const ParamAssignment& assignment,
                                    std::uint64_t seed);

struct GridSearchRow {
    ParamAssignment assignment;
    std::vector<double> fold_f1;
    double mean_f1 = 0.0;
    double ci95_half = 0.0;
    bool failed = false;
    std::string failure;
};

struct GridSearchResult {
    ParamAssignment best;
    double best_f1 = 0.0;
    std::vector<GridSearchRow> table;  // in enumeration order
};

// Scores every assignment by mean k-fold F1 over folds shared across the
// whole search. Assignments that fail to train are recorded with -inf.
GridSearchResult grid_search(ClassifierKind kind, const ParamGrid& grid, const SparseMatrix& X,
                             const std::vector<int>& y, int k, std::uint64_t seed);

// Reconstruction of sensible per-classifier default grids; the winning
// full-scale configurations are always included.
ParamGrid default_grid(ClassifierKind kind);

std::string grid_result_to_tsv(const GridSearchResult& result);

}  // namespace ticketclass
