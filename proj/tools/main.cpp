// ticketclass command line: corpus ingestion, vectorization, classifier
// selection, GA architecture tuning, evaluation, training and serving.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "ticketclass/errors.hpp"
#include "ticketclass/evaluation.hpp"
#include "ticketclass/feature_selection.hpp"
#include "ticketclass/ga.hpp"
#include "ticketclass/grid_search.hpp"
#include "ticketclass/model_io.hpp"
#include "ticketclass/report.hpp"
#include "ticketclass/rest_client.hpp"
#include "ticketclass/service.hpp"
#include "ticketclass/synthetic.hpp"
#include "ticketclass/text.hpp"

namespace tc = ticketclass;
using nlohmann::json;

namespace {

// Exit codes: 0 success, 1 usage, 2 data/validation, 3 runtime.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw tc::ValidationError("cannot write file: " + path);
    }
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw tc::ValidationError("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct PipelineFlags {
    tc::PipelineConfig config;

    void attach(CLI::App* cmd) {
        cmd->add_option("--ngram-min", config.ngram_min, "Smallest n-gram size (default 1)");
        cmd->add_option("--ngram-max", config.ngram_max, "Largest n-gram size (default 3)");
        cmd->add_option("--max-df", config.max_df_ratio,
                        "Drop terms in more than this fraction of documents (default 0.5)");
        cmd->add_option("--min-df", config.min_df_docs,
                        "Drop terms in fewer than this many documents (default 2)");
        cmd->add_option("--summary-repeats", config.summary_repeats,
                        "Total copies of the summary per document (default 3)");
        cmd->add_flag("--raw-tf,!--sublinear-tf", [this](std::int64_t count) {
            config.sublinear_tf = count <= 0;
        },
                      "Use raw term counts instead of 1+ln(count)");
    }
};

json pipeline_json(const tc::PipelineConfig& config) {
    return {{"ngram_min", config.ngram_min},       {"ngram_max", config.ngram_max},
            {"max_df_ratio", config.max_df_ratio}, {"min_df_docs", config.min_df_docs},
            {"summary_repeats", config.summary_repeats},
            {"sublinear_tf", config.sublinear_tf}};
}

// Full fit on one corpus: vectorize, optionally chi-square-select.
struct FittedFeatures {
    tc::TfidfModel tfidf;
    tc::FeatureMask mask;  // empty selected = no selection
    tc::SparseMatrix X;
    std::vector<int> y;
};

FittedFeatures fit_features(const tc::Corpus& corpus, const tc::PipelineConfig& config,
                            std::optional<std::size_t> select_k) {
    FittedFeatures out;
    const auto docs = tc::corpus_documents(corpus, config);
    out.y = corpus.labels();
    const tc::Vocabulary vocab = tc::fit_vocabulary(docs, config);
    const auto counts = tc::count_matrix(docs, vocab, config);
    out.tfidf = tc::fit_tfidf(counts, vocab, config);
    out.X = tc::transform_tfidf(out.tfidf, counts);
    if (select_k && *select_k < vocab.size()) {
        out.mask = tc::select_top_k(tc::chi2_scores(out.X, out.y), *select_k);
        out.X = tc::apply_mask(out.X, out.mask);
    } else {
        out.mask.k = vocab.size();
        out.mask.selected.resize(vocab.size());
        for (std::uint32_t j = 0; j < vocab.size(); ++j) {
            out.mask.selected[j] = j;
        }
        out.mask.scores.assign(vocab.size(), 0.0);
    }
    return out;
}

std::vector<tc::Ticket> load_raw_tickets(const std::string& path) {
    json parsed;
    try {
        parsed = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw tc::ParseError(path + ": " + e.what());
    }
    if (!parsed.is_array()) {
        throw tc::ValidationError(path + ": raw ticket file must be a JSON array");
    }
    std::vector<tc::Ticket> tickets;
    for (const auto& element : parsed) {
        tc::Ticket ticket;
        ticket.key = element.value("key", "");
        ticket.summary = element.value("summary", "");
        if (element.contains("description") && element.at("description").is_string()) {
            ticket.description = element.at("description").get<std::string>();
        }
        if (element.contains("type") && element.at("type").is_string()) {
            ticket.type = element.at("type").get<std::string>();
        }
        if (ticket.key.empty()) {
            throw tc::ValidationError(path + ": raw ticket without a key");
        }
        tickets.push_back(std::move(ticket));
    }
    return tickets;
}

std::vector<std::string> load_key_list(const std::string& path) {
    std::istringstream in(read_text(path));
    std::vector<std::string> keys;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        if (!line.empty()) {
            keys.push_back(line);
        }
    }
    return keys;
}

std::vector<std::size_t> parse_layers(const std::string& text) {
    std::vector<std::size_t> layers;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        layers.push_back(static_cast<std::size_t>(std::stoull(item)));
    }
    return layers;
}

// ---- ingest ----

struct IngestArgs {
    std::string curation_path;
    std::string raw_path;
    std::string keys_path;
    std::string endpoint;
    std::string out_path = "corpus.json";
    std::size_t max_in_flight = 4;
};

int cmd_ingest(const IngestArgs& args) {
    const auto curation = tc::load_curation_file(args.curation_path);

    std::vector<tc::Ticket> raw;
    std::vector<std::pair<std::string, std::string>> failures;
    if (!args.raw_path.empty()) {
        raw = load_raw_tickets(args.raw_path);
    } else {
        const tc::ItsClient client(
            {.base_url = args.endpoint, .max_in_flight = args.max_in_flight});
        auto report = client.fetch_many(load_key_list(args.keys_path));
        raw = std::move(report.tickets);
        failures = std::move(report.failures);
    }

    const tc::Corpus corpus = tc::attach_labels(std::move(raw), curation);
    tc::save_corpus(corpus, args.out_path);
    std::cout << tc::stats_to_tsv(tc::corpus_stats(corpus));
    std::cout << "corpus written to " << args.out_path << " (" << corpus.size() << " tickets)\n";

    if (!failures.empty()) {
        json manifest = json::array();
        for (const auto& [key, reason] : failures) {
            manifest.push_back({{"key", key}, {"reason", reason}});
        }
        const std::string failures_path = args.out_path + ".failures.json";
        write_text(failures_path, manifest.dump(2) + "\n");
        std::cerr << failures.size() << " tickets failed to fetch; manifest at " << failures_path
                  << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

// ---- main ----

int run(int argc, char** argv) {
    CLI::App app{"Bug / non-bug ticket classification toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Declarative config file (TOML/INI); flags override it");

    // ingest
    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Label raw tickets and write a corpus file");
    ingest_cmd->add_option("--curation", ingest.curation_path,
                           "key<TAB>classification file")->required();
    auto* raw_opt = ingest_cmd->add_option("--raw", ingest.raw_path,
                                           "Offline JSON array of unlabeled tickets");
    auto* keys_opt = ingest_cmd->add_option("--keys", ingest.keys_path,
                                            "File with one ticket key per line");
    ingest_cmd->add_option("--endpoint", ingest.endpoint, "Issue tracker base URL")
        ->needs(keys_opt);
    ingest_cmd->add_option("--out", ingest.out_path, "Output corpus path");
    ingest_cmd->add_option("--max-in-flight", ingest.max_in_flight,
                           "Parallel fetch limit (default 4)");
    raw_opt->excludes(keys_opt);

    // synth
    tc::SyntheticConfig synth;
    std::string synth_out = "synthetic_corpus.json";
    int synth_projects = 2;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
    synth_cmd->add_option("--tickets", synth.n_tickets, "Number of tickets (default 400)");
    synth_cmd->add_option("--projects", synth_projects, "Number of projects (default 2)");
    synth_cmd->add_option("--bug-ratio", synth.bug_ratio, "Fraction of BUG tickets");
    synth_cmd->add_option("--noise", synth.noise, "Class-word noise fraction");
    synth_cmd->add_option("--seed", synth.seed, "RNG seed");
    synth_cmd->add_option("--out", synth_out, "Output corpus path");

    // preprocess
    std::string pre_corpus, pre_out_model = "tfidf.json", pre_out_matrix = "features.mtx";
    PipelineFlags pre_flags;
    std::size_t pre_select_k = 0;
    auto* pre_cmd = app.add_subcommand("preprocess",
                                       "Fit the vectorizer and write TF-IDF features");
    pre_cmd->add_option("--corpus", pre_corpus, "Labeled corpus file")->required();
    pre_cmd->add_option("--out-model", pre_out_model, "Vectorizer output path");
    pre_cmd->add_option("--out-matrix", pre_out_matrix, "Feature matrix output path");
    pre_cmd->add_option("--select-k", pre_select_k,
                        "Chi-square top-k selection (0 = keep all features)");
    pre_flags.attach(pre_cmd);

    // grid-search
    std::string gs_corpus, gs_kind = "mlp", gs_out = "grid_search.tsv", gs_grid_path;
    int gs_folds = 10;
    std::uint64_t gs_seed = 0;
    std::size_t gs_select_k = 30000;
    PipelineFlags gs_flags;
    auto* gs_cmd = app.add_subcommand("grid-search",
                                      "Brute-force hyper-parameter sweep with k-fold scoring");
    gs_cmd->add_option("--corpus", gs_corpus, "Labeled corpus file")->required();
    gs_cmd->add_option("--kind", gs_kind, "Classifier kind: mlp, sgd, ridge, knn");
    gs_cmd->add_option("--folds", gs_folds, "Fold count (default 10)");
    gs_cmd->add_option("--seed", gs_seed, "RNG seed");
    gs_cmd->add_option("--select-k", gs_select_k, "Chi-square top-k (default 30000)");
    gs_cmd->add_option("--grid", gs_grid_path,
                       "JSON file {param: [values...]}; defaults per kind otherwise");
    gs_cmd->add_option("--out", gs_out, "Report output path");
    gs_flags.attach(gs_cmd);

    // sweep
    std::string sw_corpus, sw_out = "sweep.tsv", sw_kinds = "mlp,sgd,ridge,knn";
    std::size_t sw_min = 5000, sw_max = 60000, sw_step = 5000;
    int sw_folds = 10;
    std::uint64_t sw_seed = 0;
    PipelineFlags sw_flags;
    auto* sw_cmd = app.add_subcommand(
        "sweep", "Score classifiers across a range of chi-square feature counts");
    sw_cmd->add_option("--corpus", sw_corpus, "Labeled corpus file")->required();
    sw_cmd->add_option("--k-min", sw_min, "Smallest feature count (default 5000)");
    sw_cmd->add_option("--k-max", sw_max, "Largest feature count (default 60000)");
    sw_cmd->add_option("--k-step", sw_step, "Feature count increment (default 5000)");
    sw_cmd->add_option("--kinds", sw_kinds, "Comma-separated classifier kinds");
    sw_cmd->add_option("--folds", sw_folds, "Fold count (default 10)");
    sw_cmd->add_option("--seed", sw_seed, "RNG seed");
    sw_cmd->add_option("--out", sw_out, "Report output path");
    sw_flags.attach(sw_cmd);

    // ga
    std::string ga_corpus, ga_out_log = "ga_log.tsv", ga_out_best = "ga_best.json";
    tc::GaConfig ga_cfg;
    PipelineFlags ga_flags;
    auto* ga_cmd = app.add_subcommand("ga",
                                      "Evolve MLP architecture hyper-parameters");
    ga_cmd->add_option("--corpus", ga_corpus, "Labeled corpus file")->required();
    ga_cmd->add_option("--pop", ga_cfg.population_size, "Population size (default 50)");
    ga_cmd->add_option("--gens", ga_cfg.generations, "Generations (default 150)");
    ga_cmd->add_option("--seed", ga_cfg.seed, "RNG seed");
    ga_cmd->add_option("--p-ret", ga_cfg.p_ret, "Elite retention fraction (default 0.2)");
    ga_cmd->add_option("--p-mut", ga_cfg.p_mut, "Mutation probability (default 0.1)");
    ga_cmd->add_option("--p-sel", ga_cfg.p_sel, "Random-parent probability (default 0.3)");
    ga_cmd->add_option("--eval-split", ga_cfg.eval_split, "Train fraction (default 0.75)");
    ga_cmd->add_option("--features-min", ga_cfg.bounds.features_min, "Feature lower bound");
    ga_cmd->add_option("--features-max", ga_cfg.bounds.features_max, "Feature upper bound");
    ga_cmd->add_option("--layers-min", ga_cfg.bounds.layers_min, "Hidden layer count lower bound");
    ga_cmd->add_option("--layers-max", ga_cfg.bounds.layers_max, "Hidden layer count upper bound");
    ga_cmd->add_option("--size-min", ga_cfg.bounds.size_min, "Layer size lower bound");
    ga_cmd->add_option("--size-max", ga_cfg.bounds.size_max, "Layer size upper bound");
    ga_cmd->add_option("--mlp-max-iter", ga_cfg.mlp.max_iter, "MLP epochs per fitness");
    ga_cmd->add_option("--mlp-lr", ga_cfg.mlp.initial_lr, "MLP initial learning rate");
    ga_cmd->add_option("--out-log", ga_out_log, "Per-generation log output path");
    ga_cmd->add_option("--out-best", ga_out_best, "Best chromosome output path");
    ga_flags.attach(ga_cmd);

    // evaluate
    std::string ev_corpus, ev_out = "report", ev_ga_best;
    int ev_setting = 0;
    bool ev_ablation = false;
    int ev_folds = 10;
    std::uint64_t ev_seed = 0;
    std::size_t ev_mlp_max_iter = 0;
    double ev_mlp_lr = 0.0;
    auto* ev_cmd = app.add_subcommand("evaluate",
                                      "Per-project / cross-project k-fold evaluation");
    ev_cmd->add_option("--corpus", ev_corpus, "Labeled corpus file")->required();
    auto* setting_opt = ev_cmd->add_option("--setting", ev_setting, "Setting id 1..5");
    ev_cmd->add_flag("--ablation", ev_ablation, "Evaluate settings 1..5 with shared folds")
        ->excludes(setting_opt);
    ev_cmd->add_option("--folds", ev_folds, "Fold count (default 10)");
    ev_cmd->add_option("--seed", ev_seed, "RNG seed");
    ev_cmd->add_option("--ga-best", ev_ga_best,
                       "Best chromosome JSON from the ga command (used by setting 5)");
    ev_cmd->add_option("--mlp-max-iter", ev_mlp_max_iter, "Override MLP epochs (0 = keep)");
    ev_cmd->add_option("--mlp-lr", ev_mlp_lr, "Override MLP learning rate (0 = keep)");
    ev_cmd->add_option("--out", ev_out, "Output path prefix (.tsv and .json)");

    // train
    std::string tr_corpus, tr_out = "model.tcb", tr_ga_best, tr_layers;
    int tr_setting = 4;
    std::size_t tr_select_k = 0;
    std::size_t tr_mlp_max_iter = 0;
    double tr_mlp_lr = 0.0;
    std::uint64_t tr_seed = 0;
    PipelineFlags tr_flags;
    auto* tr_cmd = app.add_subcommand("train", "Train the full pipeline into a model bundle");
    tr_cmd->add_option("--corpus", tr_corpus, "Labeled corpus file")->required();
    tr_cmd->add_option("--setting", tr_setting, "Setting id providing the defaults (default 4)");
    tr_cmd->add_option("--select-k", tr_select_k, "Override chi-square top-k (0 = setting value)");
    tr_cmd->add_option("--layers", tr_layers, "Override hidden layers, comma separated");
    tr_cmd->add_option("--ga-best", tr_ga_best, "Best chromosome JSON from the ga command");
    tr_cmd->add_option("--mlp-max-iter", tr_mlp_max_iter, "Override MLP epochs (0 = keep)");
    tr_cmd->add_option("--mlp-lr", tr_mlp_lr, "Override MLP learning rate (0 = keep)");
    tr_cmd->add_option("--seed", tr_seed, "RNG seed");
    tr_flags.attach(tr_cmd);
    tr_cmd->add_option("--out", tr_out, "Bundle output path");

    // classify
    std::string cl_model, cl_tickets;
    auto* cl_cmd = app.add_subcommand("classify", "Classify tickets with a model bundle");
    cl_cmd->add_option("--model", cl_model, "Model bundle path")->required();
    cl_cmd->add_option("--tickets", cl_tickets, "JSON array of tickets to classify")->required();

    // serve
    std::string sv_model, sv_host = "127.0.0.1";
    int sv_port = 8080;
    auto* sv_cmd = app.add_subcommand("serve", "HTTP classification endpoint");
    sv_cmd->add_option("--model", sv_model, "Model bundle path")->required();
    sv_cmd->add_option("--host", sv_host, "Bind address (default 127.0.0.1)");
    sv_cmd->add_option("--port", sv_port, "Port (default 8080)");

    // The config file scopes options under a [subcommand] section; values
    // given on the command line win. Fallthrough lets --config appear after
    // the subcommand name as well.
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (ingest_cmd->parsed()) {
        if (ingest.raw_path.empty() && (ingest.keys_path.empty() || ingest.endpoint.empty())) {
            std::cerr << "ingest needs either --raw or both --keys and --endpoint\n";
            return kExitUsage;
        }
        return cmd_ingest(ingest);
    }

    if (synth_cmd->parsed()) {
        synth.projects.clear();
        const std::string names = "ABCDEFGH";
        for (int p = 0; p < synth_projects; ++p) {
            synth.projects.push_back(std::string("PROJ") + names[p % 8] +
                                     (p >= 8 ? std::to_string(p) : ""));
        }
        const tc::Corpus corpus = tc::make_synthetic_corpus(synth);
        tc::save_corpus(corpus, synth_out);
        std::cout << tc::stats_to_tsv(tc::corpus_stats(corpus));
        std::cout << "synthetic corpus written to " << synth_out << "\n";
        return kExitOk;
    }

    if (pre_cmd->parsed()) {
        const tc::Corpus corpus = tc::load_corpus(pre_corpus);
        const auto fitted =
            fit_features(corpus, pre_flags.config,
                         pre_select_k > 0 ? std::optional<std::size_t>(pre_select_k)
                                          : std::nullopt);
        tc::save_tfidf(fitted.tfidf, pre_out_model);
        tc::save_matrix(fitted.X, pre_out_matrix);
        json resolved = {{"command", "preprocess"},
                         {"pipeline", pipeline_json(pre_flags.config)},
                         {"select_k", pre_select_k},
                         {"vocabulary", fitted.tfidf.vocabulary.size()},
                         {"features", fitted.X.cols()},
                         {"documents", fitted.X.rows()}};
        std::cout << resolved.dump(2) << "\n";
        return kExitOk;
    }

    if (gs_cmd->parsed()) {
        const tc::Corpus corpus = tc::load_corpus(gs_corpus);
        const auto kind = tc::classifier_kind_from_string(gs_kind);
        const auto fitted = fit_features(corpus, gs_flags.config, gs_select_k);
        tc::ParamGrid grid;
        if (gs_grid_path.empty()) {
            grid = tc::default_grid(kind);
        } else {
            const json parsed = json::parse(read_text(gs_grid_path));
            for (const auto& [name, values] : parsed.items()) {
                std::vector<tc::ParamValue> list;
                for (const auto& value : values) {
                    if (value.is_number_integer()) {
                        list.emplace_back(value.get<std::int64_t>());
                    } else if (value.is_number_float()) {
                        list.emplace_back(value.get<double>());
                    } else {
                        list.emplace_back(value.get<std::string>());
                    }
                }
                grid[name] = std::move(list);
            }
        }
        const auto result = tc::grid_search(kind, grid, fitted.X, fitted.y, gs_folds, gs_seed);
        std::ostringstream report;
        report << "# config: "
               << json{{"command", "grid-search"},
                       {"kind", gs_kind},
                       {"folds", gs_folds},
                       {"seed", gs_seed},
                       {"select_k", gs_select_k},
                       {"pipeline", pipeline_json(gs_flags.config)}}
                      .dump()
               << "\n"
               << tc::grid_result_to_tsv(result);
        write_text(gs_out, report.str());
        std::cout << report.str();
        return kExitOk;
    }

    if (sw_cmd->parsed()) {
        if (sw_step == 0 || sw_min == 0 || sw_min > sw_max) {
            std::cerr << "sweep needs 0 < --k-min <= --k-max and --k-step > 0\n";
            return kExitUsage;
        }
        const tc::Corpus corpus = tc::load_corpus(sw_corpus);
        const auto fitted = fit_features(corpus, sw_flags.config, std::nullopt);
        std::vector<std::size_t> grid;
        for (std::size_t k = sw_min; k <= sw_max; k += sw_step) {
            grid.push_back(k);
        }
        std::vector<tc::ClassifierSpec> classifiers;
        std::istringstream kinds(sw_kinds);
        std::string kind;
        while (std::getline(kinds, kind, ',')) {
            tc::ClassifierSpec spec;
            spec.kind = tc::classifier_kind_from_string(kind);
            spec.mlp.seed = sw_seed;
            spec.sgd.seed = sw_seed;
            spec.ridge.seed = sw_seed;
            classifiers.push_back(spec);
        }
        const auto rows =
            tc::sweep_feature_counts(fitted.X, fitted.y, grid, classifiers, sw_folds, sw_seed);
        std::ostringstream report;
        report << "# config: "
               << json{{"command", "sweep"},
                       {"k_min", sw_min},
                       {"k_max", sw_max},
                       {"k_step", sw_step},
                       {"kinds", sw_kinds},
                       {"folds", sw_folds},
                       {"seed", sw_seed},
                       {"pipeline", pipeline_json(sw_flags.config)}}
                      .dump()
               << "\n"
               << tc::sweep_to_tsv(rows);
        write_text(sw_out, report.str());
        std::cout << report.str();
        return kExitOk;
    }

    if (ga_cmd->parsed()) {
        const tc::Corpus corpus = tc::load_corpus(ga_corpus);
        const auto fitted = fit_features(corpus, ga_flags.config, std::nullopt);
        // Clamp the feature interval to what the corpus actually provides.
        ga_cfg.bounds.features_max = std::min(ga_cfg.bounds.features_max, fitted.X.cols());
        ga_cfg.bounds.features_min = std::min(ga_cfg.bounds.features_min,
                                              ga_cfg.bounds.features_max);
        const tc::GaResult result = tc::evolve(fitted.X, fitted.y, ga_cfg);
        std::ostringstream log;
        log << "# config: "
            << json{{"command", "ga"},
                    {"pop", ga_cfg.population_size},
                    {"gens", ga_cfg.generations},
                    {"seed", ga_cfg.seed},
                    {"p_ret", ga_cfg.p_ret},
                    {"p_mut", ga_cfg.p_mut},
                    {"p_sel", ga_cfg.p_sel},
                    {"eval_split", ga_cfg.eval_split},
                    {"pipeline", pipeline_json(ga_flags.config)}}
                   .dump()
            << "\n"
            << tc::ga_history_to_tsv(result);
        write_text(ga_out_log, log.str());

        json best = {{"n_features", result.best.n_features},
                     {"hidden_layers", result.best.layers},
                     {"fitness", result.best.fitness ? json(*result.best.fitness) : json()}};
        write_text(ga_out_best, best.dump(2) + "\n");
        std::cout << "best " << result.best.to_string() << " fitness "
                  << (result.best.fitness ? *result.best.fitness : 0.0) << "\n"
                  << "log written to " << ga_out_log << ", best chromosome to " << ga_out_best
                  << "\n";
        return kExitOk;
    }

    if (ev_cmd->parsed()) {
        if (!ev_ablation && (ev_setting < 1 || ev_setting > 5)) {
            std::cerr << "evaluate needs --setting 1..5 or --ablation\n";
            return kExitUsage;
        }
        if (ev_folds < 2) {
            std::cerr << "--folds must be at least 2\n";
            return kExitUsage;
        }
        const tc::Corpus corpus = tc::load_corpus(ev_corpus);

        std::optional<std::size_t> ga_features;
        std::vector<std::size_t> ga_layers;
        if (!ev_ga_best.empty()) {
            const json best = json::parse(read_text(ev_ga_best));
            ga_features = best.at("n_features").get<std::size_t>();
            ga_layers = best.at("hidden_layers").get<std::vector<std::size_t>>();
        }

        auto tune = [&](tc::SettingConfig setting) {
            if (ev_mlp_max_iter > 0) {
                setting.mlp.max_iter = ev_mlp_max_iter;
            }
            if (ev_mlp_lr > 0.0) {
                setting.mlp.initial_lr = ev_mlp_lr;
            }
            return setting;
        };

        if (ev_ablation) {
            auto reports = tc::run_ablation(corpus, ev_folds, ev_seed, ga_features, ga_layers);
            write_text(ev_out + ".tsv", tc::ablation_to_tsv(reports));
            write_text(ev_out + ".json", tc::ablation_to_json(reports));
            std::cout << tc::ablation_to_tsv(reports);
        } else {
            tc::SettingConfig setting;
            if (ev_setting == 5) {
                if (ga_layers.empty()) {
                    std::cerr << "setting 5 needs --ga-best\n";
                    return kExitUsage;
                }
                setting = tc::SettingConfig::preset_with_architecture(
                    5, ga_features.value_or(30000), ga_layers);
            } else {
                setting = tc::SettingConfig::preset(ev_setting);
            }
            const auto report = tc::evaluate_setting(corpus, tune(setting), ev_folds, ev_seed);
            write_text(ev_out + ".tsv", tc::setting_report_to_tsv(report));
            write_text(ev_out + ".json", tc::setting_report_to_json(report));
            std::cout << tc::setting_report_to_tsv(report);
        }
        std::cout << "reports written to " << ev_out << ".tsv and " << ev_out << ".json\n";
        return kExitOk;
    }

    if (tr_cmd->parsed()) {
        const tc::Corpus corpus = tc::load_corpus(tr_corpus);
        tc::SettingConfig setting = tc::SettingConfig::preset(tr_setting == 5 ? 4 : tr_setting);
        setting.pipeline = tr_flags.config;
        if (!tr_ga_best.empty()) {
            const json best = json::parse(read_text(tr_ga_best));
            setting.select_k = best.at("n_features").get<std::size_t>();
            setting.mlp.hidden_layers = best.at("hidden_layers").get<std::vector<std::size_t>>();
            setting.mlp_source = tc::MlpParamsSource::GaIndividual;
        }
        if (tr_select_k > 0) {
            setting.select_k = tr_select_k;
        }
        if (!tr_layers.empty()) {
            setting.mlp.hidden_layers = parse_layers(tr_layers);
        }
        if (tr_mlp_max_iter > 0) {
            setting.mlp.max_iter = tr_mlp_max_iter;
        }
        if (tr_mlp_lr > 0.0) {
            setting.mlp.initial_lr = tr_mlp_lr;
        }
        setting.mlp.seed = tr_seed;

        const auto fitted = fit_features(corpus, setting.pipeline, setting.select_k);
        tc::ModelBundle bundle;
        bundle.tfidf = fitted.tfidf;
        bundle.mask = fitted.mask;
        bundle.mlp = tc::train_mlp(fitted.X, fitted.y, setting.mlp);
        bundle.model_version = "ticketclass-bundle/1";
        tc::save_bundle(bundle, tr_out);
        json resolved = {{"command", "train"},
                         {"setting", tr_setting},
                         {"pipeline", pipeline_json(setting.pipeline)},
                         {"select_k", setting.select_k ? json(*setting.select_k) : json()},
                         {"hidden_layers", setting.mlp.hidden_layers},
                         {"seed", tr_seed},
                         {"final_loss", bundle.mlp.loss_history.empty()
                                            ? json()
                                            : json(bundle.mlp.loss_history.back())},
                         {"bundle", tr_out}};
        std::cout << resolved.dump(2) << "\n";
        return kExitOk;
    }

    if (cl_cmd->parsed()) {
        const tc::ModelBundle bundle = tc::load_bundle(cl_model);
        const tc::ClassificationService service(bundle);
        const auto tickets = load_raw_tickets(cl_tickets);
        std::cout << "key\tlabel\tprobability\n";
        std::cout.setf(std::ios::fixed);
        std::cout.precision(6);
        for (const auto& ticket : tickets) {
            const auto prediction = service.classify(ticket.summary, ticket.description);
            std::cout << ticket.key << '\t' << tc::to_string(prediction.label) << '\t'
                      << prediction.probability << '\n';
        }
        return kExitOk;
    }

    if (sv_cmd->parsed()) {
        const auto service =
            std::make_shared<const tc::ClassificationService>(tc::load_bundle(sv_model));
        std::cerr << "model " << service->model_version() << " loaded from " << sv_model << "\n";
        return tc::run_server(sv_host, sv_port, service);
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const tc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const tc::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const tc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const tc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
