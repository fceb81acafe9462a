#include "ticketclass/ga.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

#include "ticketclass/errors.hpp"
#include "ticketclass/evaluation.hpp"
#include "ticketclass/feature_selection.hpp"
#include "ticketclass/parallel.hpp"

namespace ticketclass {

std::string Individual::to_string() const {
    std::ostringstream out;
    out << "i(" << n_features << ", (";
    for (std::size_t i = 0; i < layers.size(); ++i) {
        out << (i ? "," : "") << layers[i];
    }
    out << "))";
    return out.str();
}

void GaBounds::validate() const {
    if (features_min < 1 || features_min > features_max) {
        throw ConfigError("ga bounds: invalid feature interval");
    }
    if (layers_min < 1 || layers_min > layers_max) {
        throw ConfigError("ga bounds: invalid layer-count interval");
    }
    if (size_min < 1 || size_min > size_max) {
        throw ConfigError("ga bounds: invalid layer-size interval");
    }
}

bool GaBounds::contains(const Individual& ind) const {
    if (ind.n_features < features_min || ind.n_features > features_max) {
        return false;
    }
    if (ind.layers.size() < layers_min || ind.layers.size() > layers_max) {
        return false;
    }
    for (const std::size_t size : ind.layers) {
        if (size < size_min || size > size_max) {
            return false;
        }
    }
    return true;
}

void GaConfig::validate() const {
    bounds.validate();
    if (population_size < 2) {
        throw ConfigError("ga population size must be >= 2");
    }
    if (!(p_ret > 0.0 && p_ret < 1.0)) {
        throw ConfigError("p_ret must be in (0, 1)");
    }
    if (p_mut < 0.0 || p_mut > 1.0 || p_sel < 0.0 || p_sel > 1.0) {
        throw ConfigError("p_mut and p_sel must be in [0, 1]");
    }
    if (!(eval_split > 0.0 && eval_split < 1.0)) {
        throw ConfigError("eval_split must be in (0, 1)");
    }
    mlp.validate();
}

Individual random_individual(const GaBounds& bounds, Rng& rng) {
    bounds.validate();
    Individual ind;
    ind.n_features = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(bounds.features_min),
        static_cast<std::int64_t>(bounds.features_max)));
    const auto n_layers = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(bounds.layers_min),
                        static_cast<std::int64_t>(bounds.layers_max)));
    ind.layers.reserve(n_layers);
    for (std::size_t i = 0; i < n_layers; ++i) {
        ind.layers.push_back(static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(bounds.size_min),
                            static_cast<std::int64_t>(bounds.size_max))));
    }
    return ind;
}

namespace {

// Stratified single split, both classes guaranteed on both sides.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& y, double train_fraction, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < y.size(); ++i) {
        (y[i] == 1 ? pos : neg).push_back(i);
    }
    if (pos.size() < 2 || neg.size() < 2) {
        throw ValidationError("fitness split needs at least 2 members per class");
    }
    Rng rng(seed ^ 0x75a5a5a5ULL);
    rng.shuffle(pos);
    rng.shuffle(neg);
    std::vector<std::size_t> train, test;
    auto deal = [&](const std::vector<std::size_t>& members) {
        auto n_train = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(members.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
        train.insert(train.end(), members.begin(), members.begin() + n_train);
        test.insert(test.end(), members.begin() + n_train, members.end());
    };
    deal(pos);
    deal(neg);
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

// Everything that is shared by all fitness evaluations of one run.
struct FitnessContext {
    SparseMatrix train_X, test_X;
    std::vector<int> train_y, test_y;
    std::vector<double> chi2;  // scored on the train split only
};

FitnessContext make_fitness_context(const SparseMatrix& X, const std::vector<int>& y,
                                    const GaConfig& cfg) {
    const auto [train_idx, test_idx] = stratified_split(y, cfg.eval_split, cfg.seed);
    FitnessContext ctx;
    ctx.train_X = X.select_rows(train_idx);
    ctx.test_X = X.select_rows(test_idx);
    ctx.train_y = subset(y, train_idx);
    ctx.test_y = subset(y, test_idx);
    ctx.chi2 = chi2_scores(ctx.train_X, ctx.train_y);
    return ctx;
}

double fitness_in_context(Individual& ind, const FitnessContext& ctx, const GaConfig& cfg) {
    const auto mask = select_top_k(ctx.chi2, ind.n_features);
    const SparseMatrix train = apply_mask(ctx.train_X, mask);
    const SparseMatrix test = apply_mask(ctx.test_X, mask);

    MlpParams params = cfg.mlp;
    params.hidden_layers = ind.layers;
    double f1 = 0.0;
    try {
        const MlpModel model = train_mlp(train, ctx.train_y, params);
        f1 = compute_metrics(ctx.test_y, predict(model, test)).f1;
    } catch (const DivergenceError& e) {
        std::cerr << "warning: " << ind.to_string() << " diverged, fitness 0 (" << e.what()
                  << ")\n";
        f1 = 0.0;
    }
    ind.fitness = f1;
    return f1;
}

}  // namespace

double evaluate_fitness(Individual& ind, const SparseMatrix& X, const std::vector<int>& y,
                        const GaConfig& cfg) {
    cfg.validate();
    const FitnessContext ctx = make_fitness_context(X, y, cfg);
    return fitness_in_context(ind, ctx, cfg);
}

std::vector<Individual> select_parents(const std::vector<Individual>& population,
                                       const GaConfig& cfg, Rng& rng) {
    for (const auto& ind : population) {
        if (!ind.fitness) {
            throw ValidationError("select_parents: every individual needs a fitness");
        }
    }
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *population[a].fitness > *population[b].fitness;
    });

    const auto n_elite = static_cast<std::size_t>(
        std::ceil(cfg.p_ret * static_cast<double>(population.size())));
    std::vector<Individual> parents;
    std::vector<std::size_t> passed_over;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        if (rank < n_elite) {
            parents.push_back(population[order[rank]]);
        } else if (rng.next_double() < cfg.p_sel) {
            parents.push_back(population[order[rank]]);
        } else {
            passed_over.push_back(order[rank]);
        }
    }
    // A breeding pool needs at least two members; top up with the next best.
    for (std::size_t i = 0; parents.size() < 2 && i < passed_over.size(); ++i) {
        parents.push_back(population[passed_over[i]]);
    }
    return parents;
}

Individual crossover(const Individual& a, const Individual& b, const GaBounds& bounds) {
    Individual child;
    child.n_features = (a.n_features + b.n_features) / 2;

    const std::size_t cut_a = a.layers.size() / 2;  // first half of a
    const std::size_t cut_b = b.layers.size() / 2;  // second half of b
    child.layers.assign(a.layers.begin(), a.layers.begin() + static_cast<std::ptrdiff_t>(cut_a));
    child.layers.insert(child.layers.end(), b.layers.begin() + static_cast<std::ptrdiff_t>(cut_b),
                        b.layers.end());
    if (child.layers.size() > bounds.layers_max) {
        child.layers.resize(bounds.layers_max);
    }
    return child;
}

Individual mutate_addition(const Individual& ind, std::size_t new_layer_size) {
    Individual out{ind.n_features, ind.layers, std::nullopt};
    out.layers.push_back(new_layer_size);
    return out;
}

Individual mutate_deletion(const Individual& ind, std::size_t layer_index) {
    Individual out{ind.n_features, ind.layers, std::nullopt};
    out.layers.erase(out.layers.begin() + static_cast<std::ptrdiff_t>(layer_index));
    return out;
}

Individual mutate_substitution(const Individual& ind, std::size_t layer_index,
                               std::size_t new_layer_size) {
    Individual out{ind.n_features, ind.layers, std::nullopt};
    out.layers[layer_index] = new_layer_size;
    return out;
}

namespace {

enum class MutationKind : int { Addition = 0, Deletion = 1, Substitution = 2 };

bool applicable(MutationKind kind, const Individual& ind, const GaBounds& bounds) {
    switch (kind) {
        case MutationKind::Addition: return ind.layers.size() < bounds.layers_max;
        case MutationKind::Deletion: return ind.layers.size() > bounds.layers_min;
        case MutationKind::Substitution: return !ind.layers.empty();
    }
    return false;
}

}  // namespace

Individual mutate(const Individual& ind, const GaConfig& cfg, Rng& rng) {
    if (rng.next_double() >= cfg.p_mut) {
        return Individual{ind.n_features, ind.layers, ind.fitness};
    }
    auto kind = static_cast<MutationKind>(rng.below(3));
    if (!applicable(kind, ind, cfg.bounds)) {
        // Re-roll once among the other two kinds, then give up.
        const int first = static_cast<int>(kind);
        const int pick = static_cast<int>(rng.below(2));
        const int other = (first + 1 + pick) % 3;
        kind = static_cast<MutationKind>(other);
        if (!applicable(kind, ind, cfg.bounds)) {
            return Individual{ind.n_features, ind.layers, ind.fitness};
        }
    }
    const auto& bounds = cfg.bounds;
    switch (kind) {
        case MutationKind::Addition:
            return mutate_addition(
                ind, static_cast<std::size_t>(
                         rng.uniform_int(static_cast<std::int64_t>(bounds.size_min),
                                         static_cast<std::int64_t>(bounds.size_max))));
        case MutationKind::Deletion:
            return mutate_deletion(ind, rng.below(ind.layers.size()));
        case MutationKind::Substitution: {
            const std::size_t index = rng.below(ind.layers.size());
            const auto size = static_cast<std::size_t>(
                rng.uniform_int(static_cast<std::int64_t>(bounds.size_min),
                                static_cast<std::int64_t>(bounds.size_max)));
            return mutate_substitution(ind, index, size);
        }
    }
    return ind;
}

GaResult evolve(const SparseMatrix& X, const std::vector<int>& y, const GaConfig& cfg) {
    cfg.validate();
    const FitnessContext ctx = make_fitness_context(X, y, cfg);
    Rng rng(cfg.seed);

    std::vector<Individual> population;
    population.reserve(cfg.population_size);
    for (std::size_t i = 0; i < cfg.population_size; ++i) {
        population.push_back(random_individual(cfg.bounds, rng));
    }

    auto evaluate_missing = [&](std::vector<Individual>& pop) {
        std::vector<std::size_t> pending;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (!pop[i].fitness) {
                pending.push_back(i);
            }
        }
        parallel_for(pending.size(),
                     [&](std::size_t p) { fitness_in_context(pop[pending[p]], ctx, cfg); });
    };

    GaResult result;
    double best_ever = -1.0;
    auto record_generation = [&](std::size_t gen) {
        GenerationRecord rec;
        rec.generation = gen;
        rec.min = 2.0;
        double sum = 0.0;
        const Individual* best = nullptr;
        for (const auto& ind : population) {
            const double f = *ind.fitness;
            sum += f;
            rec.min = std::min(rec.min, f);
            if (!best || f > rec.best) {
                best = &ind;
                rec.best = f;
            }
        }
        rec.mean = sum / static_cast<double>(population.size());
        rec.best_individual = *best;
        if (rec.best > best_ever) {
            best_ever = rec.best;
            result.best = *best;
        }
        rec.best_ever = best_ever;
        rec.population = population;
        result.history.push_back(std::move(rec));
    };

    evaluate_missing(population);
    record_generation(0);

    for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
        const std::vector<Individual> parents = select_parents(population, cfg, rng);
        std::vector<Individual> next = parents;
        while (next.size() < cfg.population_size) {
            // Uniform pair without replacement; self-pairing is forbidden.
            const std::size_t i = rng.below(parents.size());
            std::size_t j = rng.below(parents.size() - 1);
            if (j >= i) {
                ++j;
            }
            Individual child = crossover(parents[i], parents[j], cfg.bounds);
            next.push_back(mutate(child, cfg, rng));
        }
        population = std::move(next);
        evaluate_missing(population);
        record_generation(gen);
    }
    return result;
}

std::string ga_history_to_tsv(const GaResult& result) {
    std::ostringstream out;
    out << "generation\tbest\tmean\tmin\tbest_ever\tbest_chromosome\n";
    out.setf(std::ios::fixed);
    out.precision(6);
    for (const auto& rec : result.history) {
        out << rec.generation << '\t' << rec.best << '\t' << rec.mean << '\t' << rec.min << '\t'
            << rec.best_ever << '\t' << rec.best_individual.to_string() << '\n';
    }
    return out.str();
}

}  // namespace ticketclass
