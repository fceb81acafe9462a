#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ticketclass/sparse.hpp"
#include "ticketclass/ticket.hpp"

namespace ticketclass {

struct PipelineConfig {
    int ngram_min = 1;
    int ngram_max = 3;
    double max_df_ratio = 0.5;     // drop terms with df > floor(ratio * n_docs)
    std::size_t min_df_docs = 2;   // drop terms with df < min_df_docs
    int summary_repeats = 3;       // total copies of the summary in a document
    bool sublinear_tf = true;      // tf = 1 + ln(count) instead of raw count

    void validate() const;  // throws ConfigError
    bool operator==(const PipelineConfig&) const = default;
};

// Lowercases, deletes every character that is neither alphanumeric nor
// whitespace, splits on whitespace, then drops tokens shorter than two
// characters and common English function words ("the", "and", "at", ...).
std::vector<std::string> tokenize(std::string_view text);

// All contiguous token windows of sizes n_min..n_max, in document order,
// window tokens joined by single spaces.
std::vector<std::string> ngrams(std::span<const std::string> tokens, int n_min, int n_max);

// The summary repeated `summary_repeats` times, then the description,
// space-joined.
std::string build_document(const Ticket& ticket, int summary_repeats);

// tokenize + ngrams under one config.
std::vector<std::string> analyze(std::string_view text, const PipelineConfig& config);

// One document string per ticket, in corpus order.
std::vector<std::string> corpus_documents(const Corpus& corpus, const PipelineConfig& config);

const std::vector<std::string>& english_stop_words();

// N-grams surviving the document-frequency filters, indexed in lexicographic
// order. Immutable once fitted.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq,
               std::size_t n_docs);

    std::size_t size() const { return terms_.size(); }
    std::size_t n_docs() const { return n_docs_; }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }
    std::optional<std::uint32_t> index_of(std::string_view term) const;

    bool operator==(const Vocabulary& other) const {
        return terms_ == other.terms_ && doc_freq_ == other.doc_freq_ && n_docs_ == other.n_docs_;
    }

private:
    std::vector<std::string> terms_;
    std::vector<std::size_t> doc_freq_;
    std::size_t n_docs_ = 0;
    std::unordered_map<std::string_view, std::uint32_t> index_;  // views into terms_
};

Vocabulary fit_vocabulary(const std::vector<std::string>& documents,
                          const PipelineConfig& config);
Vocabulary fit_vocabulary(const Corpus& corpus, const PipelineConfig& config);

// Raw occurrence counts, one row per document, one column per vocabulary term.
SparseMatrix count_matrix(const std::vector<std::string>& documents, const Vocabulary& vocab,
                          const PipelineConfig& config);
SparseMatrix count_matrix(const Corpus& corpus, const Vocabulary& vocab,
                          const PipelineConfig& config);

// Fitted vectorizer: smooth idf weights over a vocabulary.
struct TfidfModel {
    Vocabulary vocabulary;
    std::vector<double> idf;  // idf[t] = ln((1+n_docs)/(1+df_t)) + 1
    PipelineConfig config;
};

TfidfModel fit_tfidf(const SparseMatrix& counts, const Vocabulary& vocab,
                     const PipelineConfig& config);

// tf(t,d) * idf[t] with L2-normalized rows. All-zero rows stay all-zero.
SparseMatrix transform_tfidf(const TfidfModel& model, const SparseMatrix& counts);

// Vectorizes raw text through an already-fitted model.
SparseMatrix transform_documents(const TfidfModel& model,
                                 const std::vector<std::string>& documents);

}  // namespace ticketclass
