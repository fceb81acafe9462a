#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ticketclass/classifiers.hpp"
#include "ticketclass/text.hpp"
#include "ticketclass/ticket.hpp"

namespace ticketclass {

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    struct Confusion {
        std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    } confusion;
};

// Confusion-matrix metrics with BUG (1) as the positive class.
Metrics compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Harmonic mean 2pr/(p+r); 0 when p + r == 0.
double f1_from_pr(double precision, double recall);

struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;  // 1.96 * sample std / sqrt(n)
};
MeanCi ci95(const std::vector<double>& values);

using FoldSplit = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;

// Disjoint test folds covering all indices; per-fold class counts stay within
// one item of the global proportions. Deterministic under seed.
std::vector<FoldSplit> stratified_kfold(const std::vector<int>& y, int k, std::uint64_t seed);

template <class T>
std::vector<T> subset(const std::vector<T>& values, const std::vector<std::size_t>& indices) {
    std::vector<T> out;
    out.reserve(indices.size());
    for (const std::size_t i : indices) {
        out.push_back(values[i]);
    }
    return out;
}

struct MetricSummary {
    double mean = 0.0;
    double ci95_half = 0.0;
    std::vector<double> folds;
};

struct FoldReport {
    std::string scope;  // "project:<name>" or "cross-project"
    std::vector<Metrics> fold_metrics;
    MetricSummary precision, recall, f1, accuracy;
};

FoldReport summarize_folds(std::string scope, std::vector<Metrics> fold_metrics);

enum class MlpParamsSource : std::uint8_t { Defaults = 0, Tuned = 1, GaIndividual = 2 };
const char* to_string(MlpParamsSource s);

// One of the five pipeline configurations of the ablation study.
struct SettingConfig {
    int id = 3;
    PipelineConfig pipeline;
    std::optional<std::size_t> select_k;  // chi-square top-k; nullopt = keep all
    MlpParams mlp;
    MlpParamsSource mlp_source = MlpParamsSource::Defaults;

    // Presets 1..5. Setting 5 needs a tuned architecture (feature count +
    // hidden layers), e.g. the best GA individual.
    static SettingConfig preset(int id);
    static SettingConfig preset_with_architecture(int id, std::size_t n_features,
                                                  std::vector<std::size_t> hidden_layers);
};

struct SettingReport {
    SettingConfig setting;
    std::vector<FoldReport> per_project;
    FoldReport cross_project;
    double mean_projects_f1 = 0.0;  // arithmetic mean of per-project mean F1
    std::vector<std::string> warnings;
};

// Full-pipeline evaluation: vocabulary, idf, chi-square selection and the
// classifier are all fitted inside each training fold.
SettingReport evaluate_setting(const Corpus& corpus, const SettingConfig& setting, int k,
                               std::uint64_t seed);

// Settings 1..5 with shared folds so comparisons are paired. Setting 5 uses
// the supplied optimized architecture, defaulting to the reference one when
// none is given.
std::vector<SettingReport> run_ablation(const Corpus& corpus, int k, std::uint64_t seed,
                                        std::optional<std::size_t> setting5_features = {},
                                        std::vector<std::size_t> setting5_layers = {});

// Trains and scores one fold of the text pipeline; exposed for reuse by the
// sweep, GA fitness and tests.
Metrics evaluate_pipeline_fold(const std::vector<std::string>& train_docs,
                               const std::vector<int>& train_y,
                               const std::vector<std::string>& test_docs,
                               const std::vector<int>& test_y, const SettingConfig& setting);

}  // namespace ticketclass
