#include "ticketclass/grid_search.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ticketclass/errors.hpp"
#include "ticketclass/evaluation.hpp"
#include "ticketclass/parallel.hpp"

namespace ticketclass {

std::string param_value_to_string(const ParamValue& value) {
    if (std::holds_alternative<std::int64_t>(value)) {
        return std::to_string(std::get<std::int64_t>(value));
    }
    if (std::holds_alternative<double>(value)) {
        std::ostringstream out;
        out << std::get<double>(value);
        return out.str();
    }
    return std::get<std::string>(value);
}

std::string assignment_to_string(const ParamAssignment& assignment) {
    std::string out;
    for (const auto& [name, value] : assignment) {
        if (!out.empty()) {
            out += ' ';
        }
        out += name + "=" + param_value_to_string(value);
    }
    return out.empty() ? "(defaults)" : out;
}

std::vector<ParamAssignment> cartesian(const ParamGrid& grid) {
    for (const auto& [name, values] : grid) {
        if (values.empty()) {
            throw ConfigError("grid parameter \"" + name + "\" has no candidate values");
        }
    }
    std::vector<ParamAssignment> result{{}};
    for (const auto& [name, values] : grid) {
        std::vector<ParamAssignment> expanded;
        expanded.reserve(result.size() * values.size());
        for (const auto& partial : result) {
            for (const auto& value : values) {
                ParamAssignment next = partial;
                next.emplace_back(name, value);
                expanded.push_back(std::move(next));
            }
        }
        result = std::move(expanded);
    }
    return result;
}

namespace {

std::int64_t as_int(const ParamValue& value, const std::string& name) {
    if (std::holds_alternative<std::int64_t>(value)) {
        return std::get<std::int64_t>(value);
    }
    throw ConfigError("parameter \"" + name + "\" expects an integer");
}

double as_double(const ParamValue& value, const std::string& name) {
    if (std::holds_alternative<double>(value)) {
        return std::get<double>(value);
    }
    if (std::holds_alternative<std::int64_t>(value)) {
        return static_cast<double>(std::get<std::int64_t>(value));
    }
    throw ConfigError("parameter \"" + name + "\" expects a number");
}

std::string as_string(const ParamValue& value, const std::string& name) {
    if (std::holds_alternative<std::string>(value)) {
        return std::get<std::string>(value);
    }
    throw ConfigError("parameter \"" + name + "\" expects a string");
}

std::vector<std::size_t> parse_layer_list(const std::string& text) {
    std::vector<std::size_t> layers;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        layers.push_back(static_cast<std::size_t>(std::stoull(item)));
    }
    return layers;
}

}  // namespace

ClassifierSpec spec_from_assignment(ClassifierKind kind, const ParamAssignment& assignment,
                                    std::uint64_t seed) {
    ClassifierSpec spec;
    spec.kind = kind;
    spec.mlp.seed = seed;
    spec.sgd.seed = seed;
    spec.ridge.seed = seed;
    for (const auto& [name, value] : assignment) {
        if (kind == ClassifierKind::Mlp && name == "activation") {
            spec.mlp.activation = activation_from_string(as_string(value, name));
        } else if (kind == ClassifierKind::Mlp && name == "learning_rate") {
            spec.mlp.learning_rate = lr_policy_from_string(as_string(value, name));
        } else if (kind == ClassifierKind::Mlp && name == "max_iter") {
            spec.mlp.max_iter = static_cast<std::size_t>(as_int(value, name));
        } else if (kind == ClassifierKind::Mlp && name == "hidden_layers") {
            spec.mlp.hidden_layers = parse_layer_list(as_string(value, name));
        } else if (kind == ClassifierKind::Mlp && name == "initial_lr") {
            spec.mlp.initial_lr = as_double(value, name);
        } else if (kind == ClassifierKind::Mlp && name == "random_state") {
            spec.mlp.seed = static_cast<std::uint64_t>(as_int(value, name));
        } else if (kind == ClassifierKind::Sgd && name == "loss") {
            const auto loss = as_string(value, name);
            if (loss == "logistic") {
                spec.sgd.loss = SgdLoss::Logistic;
            } else if (loss == "modified_huber") {
                spec.sgd.loss = SgdLoss::ModifiedHuber;
            } else {
                throw ConfigError("unknown sgd loss \"" + loss + "\"");
            }
        } else if (kind == ClassifierKind::Sgd && name == "max_iter") {
            spec.sgd.max_iter = static_cast<std::size_t>(as_int(value, name));
        } else if (kind == ClassifierKind::Sgd && name == "random_state") {
            spec.sgd.seed = static_cast<std::uint64_t>(as_int(value, name));
        } else if (kind == ClassifierKind::Ridge && name == "alpha") {
            spec.ridge.alpha = as_double(value, name);
        } else if (kind == ClassifierKind::Ridge && name == "random_state") {
            spec.ridge.seed = static_cast<std::uint64_t>(as_int(value, name));
        } else if (kind == ClassifierKind::Knn && name == "n_neighbors") {
            spec.knn.n_neighbors = static_cast<std::size_t>(as_int(value, name));
        } else if (kind == ClassifierKind::Knn && name == "weights") {
            const auto weights = as_string(value, name);
            if (weights == "uniform") {
                spec.knn.weighting = KnnWeighting::Uniform;
            } else if (weights == "distance") {
                spec.knn.weighting = KnnWeighting::Distance;
            } else {
                throw ConfigError("unknown knn weights \"" + weights + "\"");
            }
        } else {
            throw ConfigError("unknown parameter \"" + name + "\" for classifier " +
                              to_string(kind));
        }
    }
    return spec;
}

GridSearchResult grid_search(ClassifierKind kind, const ParamGrid& grid, const SparseMatrix& X,
                             const std::vector<int>& y, int k, std::uint64_t seed) {
    if (k < 2) {
        throw ConfigError("grid_search: k must be >= 2");
    }
    const auto assignments = cartesian(grid);
    // One shared split set keeps the comparison paired across assignments.
    const auto splits = stratified_kfold(y, k, seed);

    GridSearchResult result;
    result.table.resize(assignments.size());
    parallel_for(assignments.size(), [&](std::size_t a) {
        GridSearchRow row;
        row.assignment = assignments[a];
        try {
            const ClassifierSpec spec = spec_from_assignment(kind, assignments[a], seed);
            for (const auto& [train_idx, test_idx] : splits) {
                const auto model = TrainedClassifier::train(spec, X.select_rows(train_idx),
                                                            subset(y, train_idx));
                const auto predicted = model.predict(X.select_rows(test_idx));
                row.fold_f1.push_back(compute_metrics(subset(y, test_idx), predicted).f1);
            }
            const auto [mean, half] = ci95(row.fold_f1);
            row.mean_f1 = mean;
            row.ci95_half = half;
        } catch (const std::exception& e) {
            row.failed = true;
            row.failure = e.what();
            row.mean_f1 = -std::numeric_limits<double>::infinity();
            row.fold_f1.clear();
        }
        result.table[a] = std::move(row);
    });

    // Best = highest mean, ties broken by enumeration order.
    std::size_t best_index = 0;
    for (std::size_t a = 1; a < result.table.size(); ++a) {
        if (result.table[a].mean_f1 > result.table[best_index].mean_f1) {
            best_index = a;
        }
    }
    result.best = result.table[best_index].assignment;
    result.best_f1 = result.table[best_index].mean_f1;
    return result;
}

ParamGrid default_grid(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Mlp:
            return {{"activation", {std::string("tanh"), std::string("relu"),
                                    std::string("logistic")}},
                    {"learning_rate", {std::string("constant"), std::string("adaptive")}},
                    {"max_iter", {std::int64_t{100}, std::int64_t{200}}},
                    {"random_state", {std::int64_t{0}}}};
        case ClassifierKind::Sgd:
            return {{"loss", {std::string("logistic"), std::string("modified_huber")}},
                    {"max_iter", {std::int64_t{1000}, std::int64_t{5000}}},
                    {"random_state", {std::int64_t{0}}}};
        case ClassifierKind::Ridge:
            return {{"alpha", {0.1, 1.0, 10.0}}, {"random_state", {std::int64_t{0}}}};
        case ClassifierKind::Knn:
            return {{"n_neighbors", {std::int64_t{2}, std::int64_t{3}, std::int64_t{5}}},
                    {"weights", {std::string("uniform"), std::string("distance")}}};
    }
    return {};
}

std::string grid_result_to_tsv(const GridSearchResult& result) {
    std::ostringstream out;
    out << "assignment\tmean_f1\tci95_half\tfold_f1\tstatus\n";
    out.setf(std::ios::fixed);
    out.precision(6);
    for (const auto& row : result.table) {
        out << assignment_to_string(row.assignment) << '\t';
        if (row.failed) {
            out << "-inf\t0\t\tfailed: " << row.failure << '\n';
            continue;
        }
        out << row.mean_f1 << '\t' << row.ci95_half << '\t';
        for (std::size_t f = 0; f < row.fold_f1.size(); ++f) {
            out << (f ? "," : "") << row.fold_f1[f];
        }
        out << "\tok\n";
    }
    out << "# best: " << assignment_to_string(result.best) << " mean_f1=" << result.best_f1
        << '\n';
    return out.str();
}

}  // namespace ticketclass
