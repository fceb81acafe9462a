// Python bindings for the ticket classification core. The module exposes the
// text pipeline, feature selection, classifiers, evaluation harness and the
// genetic optimizer; `ticketclass/__init__.py` re-exports it.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "ticketclass/errors.hpp"
#include "ticketclass/evaluation.hpp"
#include "ticketclass/feature_selection.hpp"
#include "ticketclass/ga.hpp"
#include "ticketclass/grid_search.hpp"
#include "ticketclass/model_io.hpp"
#include "ticketclass/report.hpp"
#include "ticketclass/rng.hpp"
#include "ticketclass/service.hpp"
#include "ticketclass/synthetic.hpp"
#include "ticketclass/text.hpp"

namespace py = pybind11;
using namespace ticketclass;

namespace {

SparseMatrix matrix_from_triplets(std::size_t rows, std::size_t cols,
                                  const std::vector<std::tuple<std::size_t, std::uint32_t,
                                                               double>>& triplets) {
    std::vector<SparseMatrix::Triplet> converted;
    converted.reserve(triplets.size());
    for (const auto& [r, c, v] : triplets) {
        converted.push_back({r, c, v});
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(converted));
}

std::vector<std::tuple<std::size_t, std::uint32_t, double>> matrix_triplets(
    const SparseMatrix& m) {
    std::vector<std::tuple<std::size_t, std::uint32_t, double>> out;
    out.reserve(m.nnz());
    for (const auto& t : m.to_triplets()) {
        out.emplace_back(t.row, t.col, t.value);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_ticketclass, m) {
    m.doc() = "Bug / non-bug ticket classification toolkit";

    py::register_exception<Error>(m, "TicketclassError", PyExc_RuntimeError);

    // ---- corpus ----
    py::enum_<Label>(m, "Label")
        .value("NBUG", Label::NBUG)
        .value("BUG", Label::BUG);

    py::class_<Ticket>(m, "Ticket")
        .def(py::init<>())
        .def_readwrite("key", &Ticket::key)
        .def_readwrite("summary", &Ticket::summary)
        .def_readwrite("description", &Ticket::description)
        .def_readwrite("classified", &Ticket::classified)
        .def_readwrite("type", &Ticket::type)
        .def_readwrite("label", &Ticket::label);

    py::class_<Corpus>(m, "Corpus")
        .def(py::init<std::vector<Ticket>>())
        .def("__len__", &Corpus::size)
        .def_property_readonly("tickets", &Corpus::tickets)
        .def("labels", &Corpus::labels)
        .def_static("project_of", &Corpus::project_of);

    m.def("load_corpus", &load_corpus, py::arg("path"));
    m.def("save_corpus", &save_corpus, py::arg("corpus"), py::arg("path"));

    py::class_<SyntheticConfig>(m, "SyntheticConfig")
        .def(py::init<>())
        .def_readwrite("n_tickets", &SyntheticConfig::n_tickets)
        .def_readwrite("projects", &SyntheticConfig::projects)
        .def_readwrite("bug_ratio", &SyntheticConfig::bug_ratio)
        .def_readwrite("noise", &SyntheticConfig::noise)
        .def_readwrite("seed", &SyntheticConfig::seed);
    m.def("make_synthetic_corpus", &make_synthetic_corpus, py::arg("config"));

    // ---- text pipeline ----
    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("ngram_min", &PipelineConfig::ngram_min)
        .def_readwrite("ngram_max", &PipelineConfig::ngram_max)
        .def_readwrite("max_df_ratio", &PipelineConfig::max_df_ratio)
        .def_readwrite("min_df_docs", &PipelineConfig::min_df_docs)
        .def_readwrite("summary_repeats", &PipelineConfig::summary_repeats)
        .def_readwrite("sublinear_tf", &PipelineConfig::sublinear_tf);

    m.def("tokenize", [](const std::string& text) { return tokenize(text); }, py::arg("text"));
    m.def(
        "ngrams",
        [](const std::vector<std::string>& tokens, int n_min, int n_max) {
            return ngrams(tokens, n_min, n_max);
        },
        py::arg("tokens"), py::arg("n_min"), py::arg("n_max"));
    m.def(
        "build_document",
        [](const std::string& summary, const std::string& description, int repeats) {
            Ticket ticket;
            ticket.summary = summary;
            ticket.description = description;
            return build_document(ticket, repeats);
        },
        py::arg("summary"), py::arg("description"), py::arg("summary_repeats") = 3);
    m.def("english_stop_words", &english_stop_words);

    py::class_<SparseMatrix>(m, "SparseMatrix")
        .def(py::init<std::size_t, std::size_t>(), py::arg("rows"), py::arg("cols"))
        .def_static("from_dense", &SparseMatrix::from_dense, py::arg("dense"))
        .def_static("from_triplets", &matrix_from_triplets, py::arg("rows"), py::arg("cols"),
                    py::arg("triplets"))
        .def_property_readonly("rows", &SparseMatrix::rows)
        .def_property_readonly("cols", &SparseMatrix::cols)
        .def_property_readonly("nnz", &SparseMatrix::nnz)
        .def("to_dense", &SparseMatrix::to_dense)
        .def("triplets", &matrix_triplets)
        .def("select_rows", [](const SparseMatrix& m, const std::vector<std::size_t>& idx) {
            return m.select_rows(idx);
        });

    py::class_<Vocabulary>(m, "Vocabulary")
        .def("__len__", &Vocabulary::size)
        .def_property_readonly("terms", &Vocabulary::terms)
        .def_property_readonly("doc_freq", &Vocabulary::doc_freq)
        .def_property_readonly("n_docs", &Vocabulary::n_docs)
        .def("index_of", [](const Vocabulary& v, const std::string& term) {
            return v.index_of(term);
        });

    py::class_<TfidfModel>(m, "TfidfModel")
        .def_readonly("vocabulary", &TfidfModel::vocabulary)
        .def_readonly("idf", &TfidfModel::idf)
        .def_readonly("config", &TfidfModel::config);

    m.def("corpus_documents", &corpus_documents, py::arg("corpus"), py::arg("config"));
    m.def(
        "fit_vocabulary",
        [](const std::vector<std::string>& docs, const PipelineConfig& config) {
            return fit_vocabulary(docs, config);
        },
        py::arg("documents"), py::arg("config"));
    m.def(
        "count_matrix",
        [](const std::vector<std::string>& docs, const Vocabulary& vocab,
           const PipelineConfig& config) { return count_matrix(docs, vocab, config); },
        py::arg("documents"), py::arg("vocabulary"), py::arg("config"));
    m.def("fit_tfidf", &fit_tfidf, py::arg("counts"), py::arg("vocabulary"), py::arg("config"));
    m.def("transform_tfidf", &transform_tfidf, py::arg("model"), py::arg("counts"));
    m.def("transform_documents", &transform_documents, py::arg("model"), py::arg("documents"));

    // ---- feature selection ----
    py::class_<FeatureMask>(m, "FeatureMask")
        .def_readonly("selected", &FeatureMask::selected)
        .def_readonly("k", &FeatureMask::k)
        .def_readonly("scores", &FeatureMask::scores);
    m.def("chi2_scores", &chi2_scores, py::arg("X"), py::arg("y"));
    m.def("select_top_k", &select_top_k, py::arg("scores"), py::arg("k"));
    m.def("apply_mask", &apply_mask, py::arg("X"), py::arg("mask"));

    // ---- mlp ----
    py::enum_<Activation>(m, "Activation")
        .value("TANH", Activation::Tanh)
        .value("RELU", Activation::Relu)
        .value("LOGISTIC", Activation::Logistic);
    py::enum_<LearningRatePolicy>(m, "LearningRatePolicy")
        .value("CONSTANT", LearningRatePolicy::Constant)
        .value("ADAPTIVE", LearningRatePolicy::Adaptive);

    py::class_<MlpParams>(m, "MlpParams")
        .def(py::init<>())
        .def_readwrite("hidden_layers", &MlpParams::hidden_layers)
        .def_readwrite("activation", &MlpParams::activation)
        .def_readwrite("learning_rate", &MlpParams::learning_rate)
        .def_readwrite("initial_lr", &MlpParams::initial_lr)
        .def_readwrite("momentum", &MlpParams::momentum)
        .def_readwrite("max_iter", &MlpParams::max_iter)
        .def_readwrite("batch_size", &MlpParams::batch_size)
        .def_readwrite("tol", &MlpParams::tol)
        .def_readwrite("seed", &MlpParams::seed);

    py::class_<MlpModel>(m, "MlpModel")
        .def_readonly("layer_sizes", &MlpModel::layer_sizes)
        .def_readonly("loss_history", &MlpModel::loss_history)
        .def_readonly("params", &MlpModel::params);

    m.def("init_model", &init_model, py::arg("n_features"), py::arg("params"));
    m.def("train_mlp", &train_mlp, py::arg("X"), py::arg("y"), py::arg("params"),
          py::call_guard<py::gil_scoped_release>());
    m.def("forward", &forward, py::arg("model"), py::arg("X"));
    m.def("predict", &predict, py::arg("model"), py::arg("X"), py::arg("threshold") = 0.5);

    // ---- evaluation ----
    py::class_<Metrics>(m, "Metrics")
        .def_readonly("precision", &Metrics::precision)
        .def_readonly("recall", &Metrics::recall)
        .def_readonly("f1", &Metrics::f1)
        .def_readonly("accuracy", &Metrics::accuracy)
        .def_property_readonly("confusion", [](const Metrics& m) {
            return py::make_tuple(m.confusion.tp, m.confusion.fp, m.confusion.tn,
                                  m.confusion.fn);
        });

    m.def("compute_metrics", &compute_metrics, py::arg("y_true"), py::arg("y_pred"));
    m.def("f1_from_pr", &f1_from_pr, py::arg("precision"), py::arg("recall"));
    m.def(
        "ci95",
        [](const std::vector<double>& values) {
            const auto [mean, half] = ci95(values);
            return py::make_tuple(mean, half);
        },
        py::arg("values"));
    m.def("stratified_kfold", &stratified_kfold, py::arg("y"), py::arg("k"), py::arg("seed"));

    py::class_<SettingConfig>(m, "SettingConfig")
        .def_static("preset", py::overload_cast<int>(&SettingConfig::preset), py::arg("id"))
        .def_static("preset_with_architecture", &SettingConfig::preset_with_architecture,
                    py::arg("id"), py::arg("n_features"), py::arg("hidden_layers"))
        .def_readwrite("id", &SettingConfig::id)
        .def_readwrite("pipeline", &SettingConfig::pipeline)
        .def_readwrite("select_k", &SettingConfig::select_k)
        .def_readwrite("mlp", &SettingConfig::mlp);

    m.def(
        "evaluate_setting",
        [](const Corpus& corpus, const SettingConfig& setting, int k, std::uint64_t seed) {
            py::gil_scoped_release release;
            const SettingReport report = evaluate_setting(corpus, setting, k, seed);
            py::gil_scoped_acquire acquire;
            return setting_report_to_json(report);
        },
        py::arg("corpus"), py::arg("setting"), py::arg("k"), py::arg("seed"),
        "Runs the leakage-free per-fold pipeline; returns the report as JSON");

    // ---- genetic optimizer ----
    py::class_<Rng>(m, "Rng").def(py::init<std::uint64_t>(), py::arg("seed"));

    py::class_<Individual>(m, "Individual")
        .def(py::init([](std::size_t n_features, std::vector<std::size_t> layers) {
                 return Individual{n_features, std::move(layers), std::nullopt};
             }),
             py::arg("n_features"), py::arg("layers"))
        .def_readwrite("n_features", &Individual::n_features)
        .def_readwrite("layers", &Individual::layers)
        .def_readonly("fitness", &Individual::fitness)
        .def("__repr__", &Individual::to_string);

    py::class_<GaBounds>(m, "GaBounds")
        .def(py::init<>())
        .def_readwrite("features_min", &GaBounds::features_min)
        .def_readwrite("features_max", &GaBounds::features_max)
        .def_readwrite("layers_min", &GaBounds::layers_min)
        .def_readwrite("layers_max", &GaBounds::layers_max)
        .def_readwrite("size_min", &GaBounds::size_min)
        .def_readwrite("size_max", &GaBounds::size_max)
        .def("contains", &GaBounds::contains);

    py::class_<GaConfig>(m, "GaConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &GaConfig::population_size)
        .def_readwrite("generations", &GaConfig::generations)
        .def_readwrite("p_ret", &GaConfig::p_ret)
        .def_readwrite("p_mut", &GaConfig::p_mut)
        .def_readwrite("p_sel", &GaConfig::p_sel)
        .def_readwrite("bounds", &GaConfig::bounds)
        .def_readwrite("seed", &GaConfig::seed)
        .def_readwrite("eval_split", &GaConfig::eval_split)
        .def_readwrite("mlp", &GaConfig::mlp);

    py::class_<GenerationRecord>(m, "GenerationRecord")
        .def_readonly("generation", &GenerationRecord::generation)
        .def_readonly("best", &GenerationRecord::best)
        .def_readonly("mean", &GenerationRecord::mean)
        .def_readonly("min", &GenerationRecord::min)
        .def_readonly("best_ever", &GenerationRecord::best_ever)
        .def_readonly("best_individual", &GenerationRecord::best_individual);

    py::class_<GaResult>(m, "GaResult")
        .def_readonly("best", &GaResult::best)
        .def_readonly("history", &GaResult::history);

    m.def("random_individual", &random_individual, py::arg("bounds"), py::arg("rng"));
    m.def("crossover", &crossover, py::arg("a"), py::arg("b"), py::arg("bounds"));
    m.def("mutate", &mutate, py::arg("individual"), py::arg("config"), py::arg("rng"));
    m.def("mutate_addition", &mutate_addition, py::arg("individual"), py::arg("new_layer_size"));
    m.def("mutate_deletion", &mutate_deletion, py::arg("individual"), py::arg("layer_index"));
    m.def("mutate_substitution", &mutate_substitution, py::arg("individual"),
          py::arg("layer_index"), py::arg("new_layer_size"));
    m.def(
        "evaluate_fitness",
        [](Individual& ind, const SparseMatrix& X, const std::vector<int>& y,
           const GaConfig& cfg) {
            py::gil_scoped_release release;
            return evaluate_fitness(ind, X, y, cfg);
        },
        py::arg("individual"), py::arg("X"), py::arg("y"), py::arg("config"));
    m.def("evolve", &evolve, py::arg("X"), py::arg("y"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    // ---- model bundles ----
    py::class_<ClassificationService>(m, "ClassificationService")
        .def(py::init([](const std::string& bundle_path) {
                 return ClassificationService(load_bundle(bundle_path));
             }),
             py::arg("bundle_path"))
        .def(
            "classify",
            [](const ClassificationService& service, const std::string& summary,
               const std::string& description) {
                const auto prediction = service.classify(summary, description);
                return py::make_tuple(std::string(to_string(prediction.label)),
                                      prediction.probability);
            },
            py::arg("summary"), py::arg("description") = std::string())
        .def_property_readonly("model_version", &ClassificationService::model_version);

    m.attr("__version__") = "1.0.0";
}
