// Acceptance suite: one criterion per line, PASS/FAIL/SKIP, nonzero exit on
// any failure. Criteria 1-7 run hermetically; criterion 8 needs the real
// benchmark corpus and is skipped unless TICKETCLASS_DATASET points at it.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ticketclass/evaluation.hpp"
#include "ticketclass/feature_selection.hpp"
#include "ticketclass/ga.hpp"
#include "ticketclass/mlp.hpp"
#include "ticketclass/report.hpp"
#include "ticketclass/rng.hpp"
#include "ticketclass/synthetic.hpp"
#include "ticketclass/text.hpp"
#include "ticketclass/ticket.hpp"

using namespace ticketclass;

namespace {

struct CheckFailure {
    std::string message;
};

struct SkipCriterion {
    std::string reason;
};

void require(bool condition, const std::string& message) {
    if (!condition) {
        throw CheckFailure{message};
    }
}

// ---- criterion 1: tokenizer / n-gram golden tests ----

void criterion_tokenizer() {
    const std::string last_sentence =
        "See \"3.7.1 Canonicalization and Text Defaults\" at\nRFC 2616";
    const std::vector<std::string> unigrams{"see",      "371", "canonicalization",
                                            "text",     "defaults", "rfc",
                                            "2616"};
    require(tokenize(last_sentence) == unigrams, "uni-grams differ from the golden list");

    const std::vector<std::string> bigrams{"see 371",        "371 canonicalization",
                                           "canonicalization text", "text defaults",
                                           "defaults rfc",   "rfc 2616"};
    require(ngrams(unigrams, 2, 2) == bigrams, "bi-grams differ from the golden list");

    const std::vector<std::string> trigrams{
        "see 371 canonicalization", "371 canonicalization text",
        "canonicalization text defaults", "text defaults rfc", "defaults rfc 2616"};
    require(ngrams(unigrams, 3, 3) == trigrams, "tri-grams differ from the golden list");
}

// ---- criterion 2: GA operator conformance ----

void criterion_ga_operators() {
    const Individual parent_a{21912, {12, 23, 8, 4}, {}};
    const Individual parent_b{30023, {4, 23, 5, 13, 27}, {}};
    const Individual child = crossover(parent_a, parent_b, GaBounds{});
    require(child.n_features == 25967, "crossover feature count is not 25967");
    require(child.layers == std::vector<std::size_t>{12, 23, 5, 13, 27},
            "crossover layers differ from the worked example");

    const Individual base{21912, {12, 23, 45}, {}};
    require(mutate_addition(base, 18).layers == std::vector<std::size_t>{12, 23, 45, 18},
            "addition operator differs from the worked example");
    require(mutate_deletion(base, 1).layers == std::vector<std::size_t>{12, 45},
            "deletion operator differs from the worked example");
    require(mutate_substitution(base, 0, 7).layers == std::vector<std::size_t>{7, 23, 45},
            "substitution operator differs from the worked example");

    // Pinned seeds drive the stochastic mutate() through the exact draws of
    // the three worked examples (gate, kind, layer index / size).
    GaConfig cfg;
    cfg.p_mut = 1.0;
    Rng addition_rng(3);
    require(mutate(base, cfg, addition_rng).layers ==
                std::vector<std::size_t>{12, 23, 45, 18},
            "seeded addition draw does not reproduce the example");
    Rng deletion_rng(0);
    require(mutate(base, cfg, deletion_rng).layers == std::vector<std::size_t>{12, 45},
            "seeded deletion draw does not reproduce the example");
    Rng substitution_rng(942);
    require(mutate(base, cfg, substitution_rng).layers == std::vector<std::size_t>{7, 23, 45},
            "seeded substitution draw does not reproduce the example");

    require(mutate_addition(base, 18).n_features == 21912 &&
                mutate_deletion(base, 1).n_features == 21912 &&
                mutate_substitution(base, 0, 7).n_features == 21912,
            "mutation must never touch the feature count");
}

// ---- criterion 3: MLP gradient check ----

void criterion_gradient_check() {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed * 7919 + 1);
        MlpParams params;
        const std::size_t n_hidden = 1 + rng.below(3);  // <= 3 hidden layers
        params.hidden_layers.clear();
        for (std::size_t l = 0; l < n_hidden; ++l) {
            params.hidden_layers.push_back(1 + rng.below(10));  // <= 10 units
        }
        params.activation = seed % 2 == 0 ? Activation::Tanh : Activation::Logistic;
        params.seed = seed;
        const std::size_t n_features = 2 + rng.below(7);
        const std::size_t n_samples = 4 + rng.below(17);  // <= 20 samples

        std::vector<std::vector<double>> dense(n_samples, std::vector<double>(n_features, 0.0));
        std::vector<int> y(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            for (auto& v : dense[i]) {
                if (rng.next_double() < 0.8) {
                    v = rng.uniform(-1.5, 1.5);
                }
            }
            y[i] = static_cast<int>(rng.below(2));
        }
        if (std::count(y.begin(), y.end(), 1) == 0) {
            y[0] = 1;
        }
        if (std::count(y.begin(), y.end(), 0) == 0) {
            y[0] = 0;
        }

        const MlpModel model = init_model(n_features, params);
        const SparseMatrix X = SparseMatrix::from_dense(dense);
        const auto [loss, grads] = loss_and_grad(model, X, y);
        require(std::isfinite(loss), "loss must be finite");
        const Gradients fd = oracle::fd_gradients(model, X, y, 1e-5);
        const double err = oracle::max_gradient_error(grads, fd);
        if (err >= 1e-4) {
            std::ostringstream detail;
            detail << "gradient mismatch " << err << " on network seed " << seed;
            throw CheckFailure{detail.str()};
        }
    }
}

// ---- criterion 4: oracle equivalence on every small corpus ----

void criterion_oracles() {
    struct SmallCorpus {
        std::vector<std::string> docs;
        PipelineConfig config;
    };
    std::vector<SmallCorpus> corpora;
    {
        PipelineConfig config;  // uni+bi+tri, sublinear
        config.min_df_docs = 1;
        config.max_df_ratio = 1.0;
        corpora.push_back({{"crash handler crash logger crash",
                            "feature request crash handler logger",
                            "request feature request feature logger"},
                           config});
    }
    {
        PipelineConfig config;
        config.ngram_max = 1;
        config.sublinear_tf = false;  // raw counts
        config.min_df_docs = 1;
        config.max_df_ratio = 1.0;
        corpora.push_back({{"merge deploy merge", "deploy cache deploy", "cache merge cache",
                            "merge merge deploy cache"},
                           config});
    }
    {
        PipelineConfig config;
        config.ngram_min = 1;
        config.ngram_max = 2;
        config.min_df_docs = 2;  // df filtering active
        config.max_df_ratio = 0.8;
        corpora.push_back({{"alpha bravo charlie alpha", "bravo charlie delta",
                            "charlie delta echo bravo", "delta echo alpha bravo",
                            "echo alpha bravo charlie", "alpha charlie echo"},
                           config});
    }
    {
        PipelineConfig config;
        config.min_df_docs = 1;
        config.max_df_ratio = 0.5;
        corpora.push_back({{"socket buffer overflow crash", "buffer polish cleanup",
                            "socket polish upgrade", "overflow upgrade cleanup crash",
                            "crash socket cleanup", "polish buffer overflow",
                            "upgrade crash polish", "cleanup socket buffer",
                            "overflow polish socket", "crash upgrade buffer"},
                           config});
    }

    for (std::size_t c = 0; c < corpora.size(); ++c) {
        const auto& [docs, config] = corpora[c];
        require(docs.size() <= 10, "oracle corpora stay at <= 10 documents");
        const Vocabulary vocab = fit_vocabulary(docs, config);
        const SparseMatrix counts = count_matrix(docs, vocab, config);
        const TfidfModel model = fit_tfidf(counts, vocab, config);
        const auto ours = transform_tfidf(model, counts).to_dense();
        const auto expected = oracle::dense_tfidf(counts.to_dense(), vocab.doc_freq(),
                                                  vocab.n_docs(), config.sublinear_tf);
        for (std::size_t d = 0; d < ours.size(); ++d) {
            for (std::size_t t = 0; t < ours[d].size(); ++t) {
                if (std::abs(ours[d][t] - expected[d][t]) > 1e-12) {
                    std::ostringstream detail;
                    detail << "corpus " << c << ": tf-idf[" << d << "][" << t
                           << "] differs from the dense oracle by "
                           << std::abs(ours[d][t] - expected[d][t]);
                    throw CheckFailure{detail.str()};
                }
            }
        }

        std::vector<int> y(docs.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = i % 2 == 0 ? 1 : 0;
        }
        const auto chi_ours = chi2_scores(transform_tfidf(model, counts), y);
        const auto chi_expected = oracle::dense_chi2(ours, y);
        for (std::size_t j = 0; j < chi_ours.size(); ++j) {
            if (std::abs(chi_ours[j] - chi_expected[j]) > 1e-12) {
                std::ostringstream detail;
                detail << "corpus " << c << ": chi2[" << j
                       << "] differs from the dense oracle by "
                       << std::abs(chi_ours[j] - chi_expected[j]);
                throw CheckFailure{detail.str()};
            }
        }
    }
}

// ---- criterion 5: metrics identity ----

void criterion_metrics() {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t tp = rng.below(30), fp = rng.below(30), tn = rng.below(30),
                          fn = rng.below(30);
        if (tp + fp + tn + fn == 0) {
            continue;
        }
        std::vector<int> y_true, y_pred;
        auto add = [&](std::size_t n, int truth, int prediction) {
            for (std::size_t i = 0; i < n; ++i) {
                y_true.push_back(truth);
                y_pred.push_back(prediction);
            }
        };
        add(tp, 1, 1);
        add(fp, 0, 1);
        add(tn, 0, 0);
        add(fn, 1, 0);
        const Metrics m = compute_metrics(y_true, y_pred);
        require(std::abs(m.f1 - f1_from_pr(m.precision, m.recall)) <= 1e-12,
                "f1 violates the harmonic identity");
    }
    const double f1 = f1_from_pr(0.913, 0.881);
    require(std::abs(f1 - 0.8967) <= 5e-4, "f1(0.913, 0.881) is not 0.8967 +- 0.0005");
}

// ---- criterion 6: desk-scale end-to-end pipeline ----

SettingConfig desk_scale_setting3() {
    SettingConfig setting = SettingConfig::preset(3);
    // 400 tickets mean two mini-batches per epoch; the full-scale default step
    // size cannot escape the random init in the 100-epoch budget, so the
    // exposed learning-rate knob is scaled for the desk run.
    setting.mlp.initial_lr = 0.05;
    return setting;
}

void criterion_desk_pipeline() {
    const Corpus corpus = make_synthetic_corpus({.n_tickets = 400, .seed = 0});
    require(corpus.size() == 400, "synthetic corpus must have 400 tickets");
    require(corpus_stats(corpus).projects.size() == 2, "synthetic corpus must span 2 projects");

    const SettingConfig setting = desk_scale_setting3();
    const SettingReport first = evaluate_setting(corpus, setting, 10, 0);
    std::cout << "    cross-project f1 = " << first.cross_project.f1.mean << "\n";
    require(first.cross_project.f1.mean >= 0.95, "10-fold cross-project F1 below 0.95");

    const SettingReport second = evaluate_setting(corpus, setting, 10, 0);
    require(setting_report_to_json(first) == setting_report_to_json(second),
            "two identical runs differ byte-for-byte");
}

// ---- criterion 7: GA behavior at desk scale ----

void criterion_desk_ga() {
    const Corpus corpus = make_synthetic_corpus({.n_tickets = 400, .seed = 0});
    PipelineConfig pipeline;  // defaults: uni+bi+tri, df filtering
    const auto docs = corpus_documents(corpus, pipeline);
    const auto y = corpus.labels();
    const Vocabulary vocab = fit_vocabulary(docs, pipeline);
    const auto counts = count_matrix(docs, vocab, pipeline);
    const SparseMatrix X = transform_tfidf(fit_tfidf(counts, vocab, pipeline), counts);

    GaConfig cfg;
    cfg.population_size = 12;
    cfg.generations = 8;
    cfg.seed = 0;
    cfg.bounds.features_min = 50;
    cfg.bounds.features_max = std::min<std::size_t>(2000, X.cols());
    cfg.mlp.max_iter = 30;
    cfg.mlp.initial_lr = 0.05;

    const GaResult run = evolve(X, y, cfg);
    require(run.history.size() == 9, "expected generation records 0..8");
    for (std::size_t g = 0; g < run.history.size(); ++g) {
        const auto& record = run.history[g];
        require(record.population.size() == cfg.population_size,
                "population size must stay constant");
        for (const auto& ind : record.population) {
            require(cfg.bounds.contains(ind), "individual outside bounds in generation " +
                                                  std::to_string(g) + ": " + ind.to_string());
            require(ind.fitness.has_value(), "unevaluated individual in a generation record");
        }
        if (g > 0) {
            require(record.best_ever >= run.history[g - 1].best_ever + 0.0,
                    "best-ever fitness decreased at generation " + std::to_string(g));
        }
    }
    std::cout << "    best " << run.best.to_string() << " fitness " << *run.best.fitness
              << "\n";

    const GaResult rerun = evolve(X, y, cfg);
    require(ga_history_to_tsv(run) == ga_history_to_tsv(rerun),
            "GA run is not reproducible from its seed");
    require(run.best.same_chromosome(rerun.best), "best individuals differ between reruns");
}

// ---- criterion 8: full-scale reproduction (conditional) ----

void criterion_full_scale() {
    const char* dataset = std::getenv("TICKETCLASS_DATASET");
    if (!dataset || !*dataset) {
        throw SkipCriterion{"set TICKETCLASS_DATASET to the benchmark corpus JSON to run"};
    }
    const Corpus corpus = load_corpus(dataset);
    std::cout << "    corpus: " << corpus.size() << " tickets\n";

    // Extracted feature counts within +-5% of the reference counts.
    const struct {
        int ngram_max;
        double reference;
    } expectations[] = {{1, 24496.0}, {2, 63925.0}, {3, 99351.0}};
    for (const auto& [ngram_max, reference] : expectations) {
        PipelineConfig config;
        config.ngram_max = ngram_max;
        const Vocabulary vocab = fit_vocabulary(corpus, config);
        const auto count = static_cast<double>(vocab.size());
        std::cout << "    features(1.." << ngram_max << ") = " << vocab.size() << "\n";
        require(std::abs(count - reference) <= 0.05 * reference,
                "feature count for ngram_max=" + std::to_string(ngram_max) +
                    " outside +-5% of " + std::to_string(static_cast<long>(reference)));
    }

    // Setting 4: tuned MLP, 10-fold cross-project F1 at or above 0.83.
    const SettingReport s4 = evaluate_setting(corpus, SettingConfig::preset(4), 10, 0);
    std::cout << "    setting 4 cross-project f1 = " << s4.cross_project.f1.mean << "\n";
    require(s4.cross_project.f1.mean >= 0.83, "setting 4 cross-project F1 below 0.83");

    // Setting 5 with the reference optimized architecture: within +-0.05 of 0.896.
    const SettingConfig s5 = SettingConfig::preset_with_architecture(
        5, 37362, {15, 9, 10, 11, 9, 15, 11});
    const SettingReport r5 = evaluate_setting(corpus, s5, 10, 0);
    std::cout << "    setting 5 cross-project f1 = " << r5.cross_project.f1.mean << "\n";
    require(std::abs(r5.cross_project.f1.mean - 0.896) <= 0.05,
            "setting 5 cross-project F1 not within +-0.05 of 0.896");
}

struct Criterion {
    int id;
    std::string name;
    std::function<void()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "tokenizer/n-gram golden tests", criterion_tokenizer},
        {2, "GA operator conformance", criterion_ga_operators},
        {3, "MLP gradient check (20 networks)", criterion_gradient_check},
        {4, "TF-IDF and chi-square dense-oracle equivalence", criterion_oracles},
        {5, "metrics identity", criterion_metrics},
        {6, "desk-scale end-to-end pipeline (400 tickets, setting 3)", criterion_desk_pipeline},
        {7, "desk-scale GA (pop 12, gens 8)", criterion_desk_ga},
        {8, "full-scale reproduction (conditional on TICKETCLASS_DATASET)",
         criterion_full_scale},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string verdict = "PASS";
        std::string detail;
        try {
            criterion.run();
        } catch (const CheckFailure& failure) {
            verdict = "FAIL";
            detail = failure.message;
            ++failed;
        } catch (const SkipCriterion& skip) {
            verdict = "SKIP";
            detail = skip.reason;
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = e.what();
            ++failed;
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream line;
        line << "[" << verdict << "] criterion " << criterion.id << ": " << criterion.name
             << " (" << std::fixed;
        line.precision(2);
        line << seconds << "s)";
        if (!detail.empty()) {
            line << " -- " << detail;
        }
        std::cout << line.str() << std::endl;
    }
    if (failed > 0) {
        std::cout << failed << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
