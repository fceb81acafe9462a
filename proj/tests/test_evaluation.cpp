#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ticketclass/errors.hpp"
#include "ticketclass/evaluation.hpp"
#include "ticketclass/rng.hpp"
#include "ticketclass/synthetic.hpp"

using namespace ticketclass;

TEST_CASE("balanced ten items over five folds give one of each class per fold") {
    const std::vector<int> y{1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
    const auto splits = stratified_kfold(y, 5, 0);
    REQUIRE(splits.size() == 5);
    for (const auto& [train, test] : splits) {
        REQUIRE(test.size() == 2);
        CHECK(y[test[0]] + y[test[1]] == 1);
        CHECK(train.size() == 8);
    }
}

TEST_CASE("test folds partition the index set") {
    Rng rng(1);
    std::vector<int> y;
    for (int i = 0; i < 37; ++i) {
        y.push_back(rng.next_double() < 0.4 ? 1 : 0);
    }
    while (std::count(y.begin(), y.end(), 1) < 4) {
        y.push_back(1);
    }
    const auto splits = stratified_kfold(y, 4, 3);
    std::set<std::size_t> seen;
    std::size_t total = 0;
    for (const auto& [train, test] : splits) {
        for (const std::size_t i : test) {
            seen.insert(i);
            ++total;
        }
        // train and test are disjoint
        for (const std::size_t i : train) {
            CHECK(std::find(test.begin(), test.end(), i) == test.end());
        }
    }
    CHECK(total == y.size());
    CHECK(seen.size() == y.size());
}

TEST_CASE("two folds over four balanced items stay balanced") {
    const std::vector<int> y{1, 0, 1, 0};
    const auto splits = stratified_kfold(y, 2, 9);
    for (const auto& [train, test] : splits) {
        REQUIRE(test.size() == 2);
        CHECK(y[test[0]] + y[test[1]] == 1);
    }
}

TEST_CASE("per-fold class counts stay within one of the global proportion") {
    Rng rng(6);
    std::vector<int> y;
    for (int i = 0; i < 103; ++i) {
        y.push_back(rng.next_double() < 0.3 ? 1 : 0);
    }
    const int k = 7;
    const auto splits = stratified_kfold(y, k, 11);
    const double n_pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
    for (const auto& [train, test] : splits) {
        double fold_pos = 0;
        for (const std::size_t i : test) {
            fold_pos += y[i];
        }
        const double expected = n_pos * static_cast<double>(test.size()) /
                                static_cast<double>(y.size());
        CHECK(std::abs(fold_pos - expected) <= 1.0);
    }
}

TEST_CASE("stratified_kfold rejects classes smaller than k") {
    const std::vector<int> y{1, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(stratified_kfold(y, 2, 0), ValidationError);
    CHECK_THROWS_AS(stratified_kfold(y, 1, 0), ConfigError);
}

TEST_CASE("stratified_kfold is deterministic under its seed") {
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
        y.push_back(i % 3 == 0 ? 1 : 0);
    }
    CHECK(stratified_kfold(y, 5, 42) == stratified_kfold(y, 5, 42));
    CHECK(stratified_kfold(y, 5, 42) != stratified_kfold(y, 5, 43));
}

TEST_CASE("compute_metrics on the published precision/recall pair") {
    CHECK(f1_from_pr(0.913, 0.881) == doctest::Approx(0.8967).epsilon(6e-4));
}

TEST_CASE("perfect predictions score 1.0 on every metric") {
    const std::vector<int> y{1, 0, 1, 1, 0};
    const Metrics m = compute_metrics(y, y);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
    CHECK(m.accuracy == 1.0);
}

TEST_CASE("all-negative predictions have zero recall and zero F1") {
    const std::vector<int> y{1, 0, 1, 0};
    const std::vector<int> pred{0, 0, 0, 0};
    const Metrics m = compute_metrics(y, pred);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
    CHECK(m.accuracy == 0.5);
}

TEST_CASE("a single-class predictor on a balanced set caps at F1 two thirds") {
    const std::vector<int> y{1, 1, 0, 0};
    const std::vector<int> pred{1, 1, 1, 1};
    const Metrics m = compute_metrics(y, pred);
    CHECK(m.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("f1 equals the harmonic identity on random confusion matrices") {
    Rng rng(123);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto tp = rng.below(20), fp = rng.below(20), tn = rng.below(20),
                   fn = rng.below(20);
        if (tp + fp + tn + fn == 0) {
            continue;
        }
        std::vector<int> y_true, y_pred;
        auto add = [&](std::size_t n, int t, int p) {
            for (std::size_t i = 0; i < n; ++i) {
                y_true.push_back(t);
                y_pred.push_back(p);
            }
        };
        add(tp, 1, 1);
        add(fp, 0, 1);
        add(tn, 0, 0);
        add(fn, 1, 0);
        const Metrics m = compute_metrics(y_true, y_pred);
        CHECK(m.f1 == doctest::Approx(f1_from_pr(m.precision, m.recall)).epsilon(1e-12));
        CHECK(m.confusion.tp == tp);
        CHECK(m.confusion.fp == fp);
        CHECK(m.confusion.tn == tn);
        CHECK(m.confusion.fn == fn);
    }
}

TEST_CASE("compute_metrics rejects empty input") {
    CHECK_THROWS_AS(compute_metrics({}, {}), ValidationError);
}

TEST_CASE("ci95 closed-form cases") {
    const auto constant = ci95(std::vector<double>(10, 0.8));
    CHECK(constant.mean == doctest::Approx(0.8));
    CHECK(constant.half_width == doctest::Approx(0.0));

    const auto two = ci95({0.0, 1.0});
    CHECK(two.mean == doctest::Approx(0.5));
    CHECK(two.half_width == doctest::Approx(1.96 * std::sqrt(0.5) / std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(ci95({0.5}), ValidationError);
}

TEST_CASE("ci95 is invariant under permutations") {
    std::vector<double> values{0.1, 0.9, 0.4, 0.7, 0.2};
    const auto base = ci95(values);
    Rng rng(3);
    rng.shuffle(values);
    const auto shuffled = ci95(values);
    CHECK(base.mean == doctest::Approx(shuffled.mean).epsilon(1e-15));
    CHECK(base.half_width == doctest::Approx(shuffled.half_width).epsilon(1e-15));
}

namespace {

SettingConfig fast_setting3() {
    SettingConfig setting = SettingConfig::preset(3);
    setting.pipeline.min_df_docs = 1;
    setting.mlp.max_iter = 30;
    setting.mlp.initial_lr = 0.5;  // toy corpora train full-batch
    setting.mlp.hidden_layers = {16};
    return setting;
}

}  // namespace

TEST_CASE("the separable project scores F1 1.0 and mean-projects averages") {
    const Corpus corpus = make_two_project_corpus(160, 0);
    const SettingReport report = evaluate_setting(corpus, fast_setting3(), 3, 0);
    REQUIRE(report.per_project.size() == 2);
    CHECK(report.per_project[0].scope == "project:ALPHA");
    CHECK(report.per_project[0].f1.mean == doctest::Approx(1.0));
    const double expected_mean =
        (report.per_project[0].f1.mean + report.per_project[1].f1.mean) / 2.0;
    CHECK(report.mean_projects_f1 == doctest::Approx(expected_mean).epsilon(1e-12));
    CHECK(report.cross_project.scope == "cross-project");
    CHECK(report.cross_project.fold_metrics.size() == 3);
}

TEST_CASE("tri-gram signal only helps once tri-grams are in the pipeline") {
    const Corpus corpus = make_trigram_signal_corpus(200, 1);
    SettingConfig s2 = SettingConfig::preset(2);
    s2.mlp.max_iter = 40;
    s2.mlp.initial_lr = 0.5;
    s2.mlp.hidden_layers = {16};
    SettingConfig s3 = fast_setting3();
    s3.mlp.max_iter = 40;
    s3.select_k = 10;  // desk-scale stand-in for the 30k selection
    const SettingReport r2 = evaluate_setting(corpus, s2, 3, 5);
    const SettingReport r3 = evaluate_setting(corpus, s3, 3, 5);
    CHECK(r3.cross_project.f1.mean >= r2.cross_project.f1.mean);
    CHECK(r3.cross_project.f1.mean > 0.9);  // the tri-gram route finds the phrase
}

TEST_CASE("projects with a class smaller than k are skipped with a warning") {
    std::vector<Ticket> tickets;
    auto add = [&](const std::string& key, bool bug, const std::string& text) {
        Ticket t;
        t.key = key;
        t.summary = text;
        t.description = text + " body words here";
        t.classified = bug ? "BUG" : "TASK";
        t.type = "BUG";
        t.label = bug ? Label::BUG : Label::NBUG;
        tickets.push_back(t);
    };
    // TINY has a single BUG ticket; k = 2 cannot stratify it.
    add("TINY-1", true, "crash crash crash");
    add("TINY-2", false, "feature feature");
    add("TINY-3", false, "polish polish");
    for (int i = 0; i < 16; ++i) {
        add("BIG-" + std::to_string(i), i % 2 == 0,
            i % 2 == 0 ? "crash exception failure broken" : "feature request polish cleanup");
    }
    SettingConfig setting = fast_setting3();
    setting.pipeline.min_df_docs = 1;
    const SettingReport report = evaluate_setting(Corpus(tickets), setting, 2, 0);
    REQUIRE(report.per_project.size() == 1);
    CHECK(report.per_project[0].scope == "project:BIG");
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("TINY") != std::string::npos);
}

TEST_CASE("pipeline fitting never sees the test fold") {
    const Corpus corpus = make_synthetic_corpus({.n_tickets = 40, .seed = 3});
    const auto docs = corpus_documents(corpus, PipelineConfig{});
    const auto labels = corpus.labels();
    const auto splits = stratified_kfold(labels, 4, 0);
    const auto& [train_idx, test_idx] = splits.front();

    PipelineConfig config;
    config.min_df_docs = 1;
    auto train_docs = subset(docs, train_idx);
    const Vocabulary fitted = fit_vocabulary(train_docs, config);

    // Mangle every test document; the fitted vocabulary must not move.
    auto mangled = docs;
    for (const std::size_t i : test_idx) {
        mangled[i] = "zzz qqq xxx corrupted beyond recognition";
    }
    const Vocabulary refitted = fit_vocabulary(subset(mangled, train_idx), config);
    CHECK(fitted == refitted);
}

TEST_CASE("evaluate_setting is bit-reproducible under a seed") {
    const Corpus corpus = make_synthetic_corpus({.n_tickets = 60, .seed = 8});
    SettingConfig setting = fast_setting3();
    setting.mlp.max_iter = 10;
    const SettingReport a = evaluate_setting(corpus, setting, 3, 21);
    const SettingReport b = evaluate_setting(corpus, setting, 3, 21);
    REQUIRE(a.cross_project.f1.folds.size() == b.cross_project.f1.folds.size());
    for (std::size_t f = 0; f < a.cross_project.f1.folds.size(); ++f) {
        CHECK(a.cross_project.f1.folds[f] == b.cross_project.f1.folds[f]);
    }
    REQUIRE(a.per_project.size() == b.per_project.size());
    for (std::size_t p = 0; p < a.per_project.size(); ++p) {
        CHECK(a.per_project[p].f1.folds == b.per_project[p].f1.folds);
    }
}

TEST_CASE("run_ablation emits five paired bundles in setting order") {
    const Corpus corpus = make_synthetic_corpus({.n_tickets = 48, .seed = 5});
    // Shrink the models so the five settings stay quick.
    auto reports = run_ablation(corpus, 2, 0, 64, {8});
    REQUIRE(reports.size() == 5);
    for (int id = 1; id <= 5; ++id) {
        CHECK(reports[id - 1].setting.id == id);
    }
    // Shared folds: fold sizes agree across settings for every scope.
    for (std::size_t s = 1; s < reports.size(); ++s) {
        REQUIRE(reports[s].cross_project.fold_metrics.size() ==
                reports[0].cross_project.fold_metrics.size());
    }
}

TEST_CASE("setting presets match their described configurations") {
    const SettingConfig s1 = SettingConfig::preset(1);
    CHECK(s1.pipeline.ngram_max == 1);
    CHECK_FALSE(s1.pipeline.sublinear_tf);
    CHECK(s1.pipeline.min_df_docs == 1);
    CHECK(s1.pipeline.max_df_ratio == 1.0);
    CHECK_FALSE(s1.select_k.has_value());

    const SettingConfig s2 = SettingConfig::preset(2);
    CHECK(s2.pipeline.ngram_max == 2);
    CHECK(s2.pipeline.sublinear_tf);
    CHECK(s2.pipeline.min_df_docs == 2);
    CHECK_FALSE(s2.select_k.has_value());

    const SettingConfig s3 = SettingConfig::preset(3);
    CHECK(s3.pipeline.ngram_max == 3);
    CHECK(s3.select_k == 30000);

    const SettingConfig s4 = SettingConfig::preset(4);
    CHECK(s4.mlp.activation == Activation::Tanh);
    CHECK(s4.mlp.learning_rate == LearningRatePolicy::Adaptive);
    CHECK(s4.mlp.max_iter == 100);
    CHECK(s4.mlp_source == MlpParamsSource::Tuned);

    CHECK_THROWS_AS(SettingConfig::preset(5), ConfigError);
    const SettingConfig s5 = SettingConfig::preset_with_architecture(5, 37362,
                                                                     {15, 9, 10, 11, 9, 15, 11});
    CHECK(s5.id == 5);
    CHECK(s5.select_k == 37362);
    CHECK(s5.mlp.hidden_layers == std::vector<std::size_t>{15, 9, 10, 11, 9, 15, 11});
    CHECK(s5.mlp_source == MlpParamsSource::GaIndividual);

    CHECK_THROWS_AS(SettingConfig::preset(0), ConfigError);
}
