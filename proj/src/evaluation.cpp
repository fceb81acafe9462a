#include "ticketclass/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ticketclass/errors.hpp"
#include "ticketclass/feature_selection.hpp"
#include "ticketclass/parallel.hpp"
#include "ticketclass/rng.hpp"

namespace ticketclass {

Metrics compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.empty()) {
        throw ValidationError("compute_metrics: empty input");
    }
    if (y_true.size() != y_pred.size()) {
        throw DimensionError("compute_metrics: length mismatch");
    }
    Metrics m;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if ((y_true[i] != 0 && y_true[i] != 1) || (y_pred[i] != 0 && y_pred[i] != 1)) {
            throw ValidationError("compute_metrics: labels must be 0 or 1");
        }
        if (y_true[i] == 1) {
            (y_pred[i] == 1 ? m.confusion.tp : m.confusion.fn) += 1;
        } else {
            (y_pred[i] == 1 ? m.confusion.fp : m.confusion.tn) += 1;
        }
    }
    const auto& c = m.confusion;
    m.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp)
                                  : 0.0;
    m.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn)
                               : 0.0;
    m.f1 = f1_from_pr(m.precision, m.recall);
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(y_true.size());
    return m;
}

double f1_from_pr(double precision, double recall) {
    const double sum = precision + recall;
    return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

MeanCi ci95(const std::vector<double>& values) {
    if (values.size() < 2) {
        throw ValidationError("ci95 needs at least 2 values");
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double sample_std = std::sqrt(ss / (n - 1.0));
    return {mean, 1.96 * sample_std / std::sqrt(n)};
}

std::vector<FoldSplit> stratified_kfold(const std::vector<int>& y, int k, std::uint64_t seed) {
    if (k < 2) {
        throw ConfigError("stratified_kfold: k must be >= 2");
    }
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < y.size(); ++i) {
        (y[i] == 1 ? pos : neg).push_back(i);
    }
    const auto uk = static_cast<std::size_t>(k);
    if (pos.size() < uk || neg.size() < uk) {
        throw ValidationError("stratified_kfold: every class needs at least k members");
    }
    Rng rng(seed);
    rng.shuffle(pos);
    rng.shuffle(neg);

    std::vector<std::vector<std::size_t>> test_folds(uk);
    auto deal = [&](const std::vector<std::size_t>& members) {
        // Contiguous chunks; the first (size % k) folds take one extra item.
        const std::size_t base = members.size() / uk;
        const std::size_t extra = members.size() % uk;
        std::size_t offset = 0;
        for (std::size_t f = 0; f < uk; ++f) {
            const std::size_t take = base + (f < extra ? 1 : 0);
            for (std::size_t j = 0; j < take; ++j) {
                test_folds[f].push_back(members[offset + j]);
            }
            offset += take;
        }
    };
    deal(pos);
    deal(neg);

    std::vector<FoldSplit> splits;
    splits.reserve(uk);
    for (std::size_t f = 0; f < uk; ++f) {
        auto& test = test_folds[f];
        std::sort(test.begin(), test.end());
        std::vector<std::size_t> train;
        train.reserve(y.size() - test.size());
        std::size_t cursor = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (cursor < test.size() && test[cursor] == i) {
                ++cursor;
            } else {
                train.push_back(i);
            }
        }
        splits.emplace_back(std::move(train), std::move(test));
    }
    return splits;
}

FoldReport summarize_folds(std::string scope, std::vector<Metrics> fold_metrics) {
    FoldReport report;
    report.scope = std::move(scope);
    report.fold_metrics = std::move(fold_metrics);
    auto summarize = [&](auto getter) {
        MetricSummary summary;
        for (const auto& m : report.fold_metrics) {
            summary.folds.push_back(getter(m));
        }
        if (summary.folds.size() >= 2) {
            const auto [mean, half] = ci95(summary.folds);
            summary.mean = mean;
            summary.ci95_half = half;
        } else if (summary.folds.size() == 1) {
            summary.mean = summary.folds.front();
        }
        return summary;
    };
    report.precision = summarize([](const Metrics& m) { return m.precision; });
    report.recall = summarize([](const Metrics& m) { return m.recall; });
    report.f1 = summarize([](const Metrics& m) { return m.f1; });
    report.accuracy = summarize([](const Metrics& m) { return m.accuracy; });
    return report;
}

const char* to_string(MlpParamsSource s) {
    switch (s) {
        case MlpParamsSource::Defaults: return "defaults";
        case MlpParamsSource::Tuned: return "tuned";
        case MlpParamsSource::GaIndividual: return "ga-individual";
    }
    return "defaults";
}

SettingConfig SettingConfig::preset(int id) {
    SettingConfig cfg;
    cfg.id = id;
    switch (id) {
        case 1:
            // Uni-grams, raw term counts with idf, no df filtering, all features.
            cfg.pipeline.ngram_min = 1;
            cfg.pipeline.ngram_max = 1;
            cfg.pipeline.sublinear_tf = false;
            cfg.pipeline.max_df_ratio = 1.0;
            cfg.pipeline.min_df_docs = 1;
            cfg.select_k = std::nullopt;
            cfg.mlp_source = MlpParamsSource::Defaults;
            break;
        case 2:
            // Uni+bi-grams, log tf, df filtering, all features.
            cfg.pipeline.ngram_min = 1;
            cfg.pipeline.ngram_max = 2;
            cfg.pipeline.sublinear_tf = true;
            cfg.select_k = std::nullopt;
            cfg.mlp_source = MlpParamsSource::Defaults;
            break;
        case 3:
            // Uni+bi+tri-grams, log tf, df filtering, chi-square top 30k.
            cfg.pipeline.ngram_max = 3;
            cfg.select_k = 30000;
            cfg.mlp_source = MlpParamsSource::Defaults;
            break;
        case 4:
            // Setting 3 vectorization with the tuned classifier parameters.
            cfg.pipeline.ngram_max = 3;
            cfg.select_k = 30000;
            cfg.mlp.activation = Activation::Tanh;
            cfg.mlp.learning_rate = LearningRatePolicy::Adaptive;
            cfg.mlp.max_iter = 100;
            cfg.mlp.seed = 0;
            cfg.mlp_source = MlpParamsSource::Tuned;
            break;
        case 5:
            throw ConfigError(
                "setting 5 needs an optimized architecture; use preset_with_architecture");
        default:
            throw ConfigError("setting id must be 1..5");
    }
    return cfg;
}

SettingConfig SettingConfig::preset_with_architecture(int id, std::size_t n_features,
                                                      std::vector<std::size_t> hidden_layers) {
    if (id != 5) {
        SettingConfig cfg = preset(id);
        cfg.select_k = n_features;
        cfg.mlp.hidden_layers = std::move(hidden_layers);
        return cfg;
    }
    SettingConfig cfg = preset(4);
    cfg.id = 5;
    cfg.select_k = n_features;
    cfg.mlp.hidden_layers = std::move(hidden_layers);
    cfg.mlp_source = MlpParamsSource::GaIndividual;
    return cfg;
}

Metrics evaluate_pipeline_fold(const std::vector<std::string>& train_docs,
                               const std::vector<int>& train_y,
                               const std::vector<std::string>& test_docs,
                               const std::vector<int>& test_y, const SettingConfig& setting) {
    // Everything is fitted on the training documents only.
    const Vocabulary vocab = fit_vocabulary(train_docs, setting.pipeline);
    const SparseMatrix train_counts = count_matrix(train_docs, vocab, setting.pipeline);
    const TfidfModel tfidf = fit_tfidf(train_counts, vocab, setting.pipeline);
    SparseMatrix train_X = transform_tfidf(tfidf, train_counts);
    SparseMatrix test_X = transform_documents(tfidf, test_docs);

    if (setting.select_k && *setting.select_k < vocab.size()) {
        const auto mask = select_top_k(chi2_scores(train_X, train_y), *setting.select_k);
        train_X = apply_mask(train_X, mask);
        test_X = apply_mask(test_X, mask);
    }

    const auto model = train_mlp(train_X, train_y, setting.mlp);
    return compute_metrics(test_y, predict(model, test_X));
}

namespace {

struct ScopeData {
    std::string scope;
    std::vector<std::string> docs;
    std::vector<int> labels;
};

FoldReport evaluate_scope(const ScopeData& data, const std::vector<FoldSplit>& splits,
                          const SettingConfig& setting) {
    std::vector<Metrics> fold_metrics(splits.size());
    parallel_for(splits.size(), [&](std::size_t f) {
        const auto& [train_idx, test_idx] = splits[f];
        SettingConfig fold_setting = setting;
        fold_setting.mlp.seed = setting.mlp.seed + f;  // independent fold seeds
        fold_metrics[f] =
            evaluate_pipeline_fold(subset(data.docs, train_idx), subset(data.labels, train_idx),
                                   subset(data.docs, test_idx), subset(data.labels, test_idx),
                                   fold_setting);
    });
    return summarize_folds(data.scope, std::move(fold_metrics));
}

std::vector<ScopeData> corpus_scopes(const Corpus& corpus, const PipelineConfig& pipeline) {
    const auto docs = corpus_documents(corpus, pipeline);
    const auto labels = corpus.labels();

    std::map<std::string, ScopeData> projects;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto& scope = projects[Corpus::project_of(corpus.tickets()[i].key)];
        scope.docs.push_back(docs[i]);
        scope.labels.push_back(labels[i]);
    }
    std::vector<ScopeData> scopes;
    for (auto& [name, scope] : projects) {
        scope.scope = "project:" + name;
        scopes.push_back(std::move(scope));
    }
    ScopeData cross;
    cross.scope = "cross-project";
    cross.docs = docs;
    cross.labels = labels;
    scopes.push_back(std::move(cross));
    return scopes;
}

SettingReport evaluate_setting_with_folds(
    const std::vector<ScopeData>& scopes,
    const std::vector<std::vector<FoldSplit>>& fold_sets,  // empty split set = skipped scope
    const SettingConfig& setting) {
    SettingReport report;
    report.setting = setting;
    std::vector<double> project_means;
    for (std::size_t s = 0; s < scopes.size(); ++s) {
        if (fold_sets[s].empty()) {
            report.warnings.push_back(scopes[s].scope +
                                      " skipped: a class has fewer members than k");
            continue;
        }
        FoldReport fold_report = evaluate_scope(scopes[s], fold_sets[s], setting);
        if (scopes[s].scope == "cross-project") {
            report.cross_project = std::move(fold_report);
        } else {
            project_means.push_back(fold_report.f1.mean);
            report.per_project.push_back(std::move(fold_report));
        }
    }
    if (!project_means.empty()) {
        report.mean_projects_f1 =
            std::accumulate(project_means.begin(), project_means.end(), 0.0) /
            static_cast<double>(project_means.size());
    }
    return report;
}

std::vector<std::vector<FoldSplit>> make_fold_sets(const std::vector<ScopeData>& scopes, int k,
                                                   std::uint64_t seed) {
    std::vector<std::vector<FoldSplit>> fold_sets;
    for (const auto& scope : scopes) {
        const auto n_pos = static_cast<std::size_t>(
            std::count(scope.labels.begin(), scope.labels.end(), 1));
        const auto n_neg = scope.labels.size() - n_pos;
        if (n_pos < static_cast<std::size_t>(k) || n_neg < static_cast<std::size_t>(k)) {
            fold_sets.emplace_back();  // skipped
        } else {
            fold_sets.push_back(stratified_kfold(scope.labels, k, seed));
        }
    }
    return fold_sets;
}

}  // namespace

SettingReport evaluate_setting(const Corpus& corpus, const SettingConfig& setting, int k,
                               std::uint64_t seed) {
    if (corpus.empty()) {
        throw ValidationError("evaluate_setting: empty corpus");
    }
    const auto scopes = corpus_scopes(corpus, setting.pipeline);
    return evaluate_setting_with_folds(scopes, make_fold_sets(scopes, k, seed), setting);
}

std::vector<SettingReport> run_ablation(const Corpus& corpus, int k, std::uint64_t seed,
                                        std::optional<std::size_t> setting5_features,
                                        std::vector<std::size_t> setting5_layers) {
    if (corpus.empty()) {
        throw ValidationError("run_ablation: empty corpus");
    }
    std::vector<SettingConfig> settings;
    for (int id = 1; id <= 4; ++id) {
        settings.push_back(SettingConfig::preset(id));
    }
    if (setting5_layers.empty()) {
        // Reference optimized architecture used when no GA result is supplied.
        setting5_features = setting5_features.value_or(37362);
        setting5_layers = {15, 9, 10, 11, 9, 15, 11};
    }
    settings.push_back(SettingConfig::preset_with_architecture(
        5, setting5_features.value_or(30000), std::move(setting5_layers)));

    // Scope membership and folds are shared across settings, so comparisons
    // between settings are paired. Documents are rebuilt per setting because
    // the n-gram range is part of the pipeline config.
    std::vector<SettingReport> reports;
    std::vector<std::vector<FoldSplit>> fold_sets;
    for (const auto& setting : settings) {
        const auto scopes = corpus_scopes(corpus, setting.pipeline);
        if (fold_sets.empty()) {
            fold_sets = make_fold_sets(scopes, k, seed);
        }
        reports.push_back(evaluate_setting_with_folds(scopes, fold_sets, setting));
    }
    return reports;
}

}  // namespace ticketclass
