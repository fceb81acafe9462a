#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ticketclass/mlp.hpp"
#include "ticketclass/rng.hpp"
#include "ticketclass/sparse.hpp"

namespace ticketclass {

// GA chromosome: input feature count plus hidden layer structure.
struct Individual {
    std::size_t n_features = 0;
    std::vector<std::size_t> layers;
    std::optional<double> fitness;

    std::string to_string() const;  // "i(25540, (11,25,18,6,13))"
    bool same_chromosome(const Individual& other) const {
        return n_features == other.n_features && layers == other.layers;
    }
};

struct GaBounds {
    std::size_t features_min = 20000, features_max = 60000;
    std::size_t layers_min = 2, layers_max = 15;
    std::size_t size_min = 1, size_max = 30;

    void validate() const;
    bool contains(const Individual& ind) const;
};

struct GaConfig {
    std::size_t population_size = 50;
    std::size_t generations = 150;
    double p_ret = 0.20;  // elite fraction always retained
    double p_mut = 0.1;   // per-individual mutation probability
    double p_sel = 0.3;   // chance to keep a non-elite as parent
    GaBounds bounds;
    std::uint64_t seed = 0;
    double eval_split = 0.75;  // train fraction of the fitness split
    MlpParams mlp;             // base MLP params; hidden_layers come from the individual

    void validate() const;
};

Individual random_individual(const GaBounds& bounds, Rng& rng);

// Chi-square-selects the individual's feature count on the train split,
// trains an MLP with its layers, returns F1 on the held-out split. Divergence
// scores 0. The 75/25 split is stratified and derived from cfg.seed, so every
// individual of a run is scored on identical data.
double evaluate_fitness(Individual& ind, const SparseMatrix& X, const std::vector<int>& y,
                        const GaConfig& cfg);

// Elites (top ceil(p_ret * N)) always survive; every other individual is kept
// with probability p_sel. At least two parents are guaranteed.
std::vector<Individual> select_parents(const std::vector<Individual>& population,
                                       const GaConfig& cfg, Rng& rng);

// Child takes the floor-mean feature count and the first half of a's layers
// followed by the second half of b's. Layer counts above the bound truncate
// from the tail.
Individual crossover(const Individual& a, const Individual& b, const GaBounds& bounds);

// Deterministic mutation operators.
Individual mutate_addition(const Individual& ind, std::size_t new_layer_size);
Individual mutate_deletion(const Individual& ind, std::size_t layer_index);
Individual mutate_substitution(const Individual& ind, std::size_t layer_index,
                               std::size_t new_layer_size);

// With probability p_mut applies one mutation kind chosen uniformly
// (addition / deletion / substitution). A kind that cannot apply at the
// bounds is re-rolled once among the remaining kinds.
Individual mutate(const Individual& ind, const GaConfig& cfg, Rng& rng);

struct GenerationRecord {
    std::size_t generation = 0;
    double best = 0.0;
    double mean = 0.0;
    double min = 0.0;
    Individual best_individual;
    double best_ever = 0.0;
    std::vector<Individual> population;  // snapshot after evaluation
};

struct GaResult {
    Individual best;  // best ever seen
    std::vector<GenerationRecord> history;
};

// Initialization, evaluation, elitist selection, crossover refill, offspring
// mutation, re-evaluation, for cfg.generations iterations.
GaResult evolve(const SparseMatrix& X, const std::vector<int>& y, const GaConfig& cfg);

std::string ga_history_to_tsv(const GaResult& result);

}  // namespace ticketclass
