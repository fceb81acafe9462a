#include "ticketclass/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_set>

#include "ticketclass/errors.hpp"

namespace ticketclass {

void PipelineConfig::validate() const {
    if (ngram_min < 1 || ngram_min > ngram_max || ngram_max > 3) {
        throw ConfigError("ngram range must satisfy 1 <= min <= max <= 3");
    }
    if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0)) {
        throw ConfigError("max_df_ratio must be in (0, 1]");
    }
    if (min_df_docs < 1) {
        throw ConfigError("min_df_docs must be >= 1");
    }
    if (summary_repeats < 1) {
        throw ConfigError("summary_repeats must be >= 1");
    }
}

const std::vector<std::string>& english_stop_words() {
    // The common English function-word list; single-letter entries are
    // already covered by the minimum token length.
    static const std::vector<std::string> words{
        "about",     "above",   "after",   "again",    "against", "ain",      "all",
        "am",        "an",      "and",     "any",      "are",     "aren",     "as",
        "at",        "be",      "because", "been",     "before",  "being",    "below",
        "between",   "both",    "but",     "by",       "can",     "couldn",   "did",
        "didn",      "do",      "does",    "doesn",    "doing",   "don",      "down",
        "during",    "each",    "few",     "for",      "from",    "further",  "had",
        "hadn",      "has",     "hasn",    "have",     "haven",   "having",   "he",
        "her",       "here",    "hers",    "herself",  "him",     "himself",  "his",
        "how",       "if",      "in",      "into",     "is",      "isn",      "it",
        "its",       "itself",  "just",    "ll",       "ma",      "me",       "mightn",
        "more",      "most",    "mustn",   "my",       "myself",  "needn",    "no",
        "nor",       "not",     "now",     "of",       "off",     "on",       "once",
        "only",      "or",      "other",   "our",      "ours",    "ourselves","out",
        "over",      "own",     "re",      "same",     "shan",    "she",      "should",
        "shouldn",   "so",      "some",    "such",     "than",    "that",     "the",
        "their",     "theirs",  "them",    "themselves","then",   "there",    "these",
        "they",      "this",    "those",   "through",  "to",      "too",      "under",
        "until",     "up",      "ve",      "very",     "was",     "wasn",     "we",
        "were",      "weren",   "what",    "when",     "where",   "which",    "while",
        "who",       "whom",    "why",     "will",     "with",    "won",      "wouldn",
        "you",       "your",    "yours",   "yourself", "yourselves"};
    return words;
}

namespace {

const std::unordered_set<std::string_view>& stop_word_set() {
    static const std::unordered_set<std::string_view> set(english_stop_words().begin(),
                                                          english_stop_words().end());
    return set;
}

bool is_ascii_alnum(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= 2 && !stop_word_set().contains(current)) {
            tokens.push_back(current);
        }
        current.clear();
    };
    for (const char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        if (is_ascii_alnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (is_ascii_space(c)) {
            flush();
        }
        // Every other character (punctuation, non-ASCII bytes) is deleted, so
        // "3.7.1" collapses to "371" rather than splitting.
    }
    flush();
    return tokens;
}

std::vector<std::string> ngrams(std::span<const std::string> tokens, int n_min, int n_max) {
    if (n_min < 1 || n_min > n_max) {
        throw ConfigError("ngrams requires 1 <= n_min <= n_max");
    }
    std::vector<std::string> grams;
    for (int n = n_min; n <= n_max; ++n) {
        if (tokens.size() < static_cast<std::size_t>(n)) {
            continue;
        }
        for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
            std::string gram = tokens[start];
            for (std::size_t j = 1; j < static_cast<std::size_t>(n); ++j) {
                gram += ' ';
                gram += tokens[start + j];
            }
            grams.push_back(std::move(gram));
        }
    }
    return grams;
}

std::string build_document(const Ticket& ticket, int summary_repeats) {
    if (summary_repeats < 1) {
        throw ConfigError("summary_repeats must be >= 1");
    }
    std::string doc;
    for (int i = 0; i < summary_repeats; ++i) {
        if (!ticket.summary.empty()) {
            if (!doc.empty()) {
                doc += ' ';
            }
            doc += ticket.summary;
        }
    }
    if (!ticket.description.empty()) {
        if (!doc.empty()) {
            doc += ' ';
        }
        doc += ticket.description;
    }
    return doc;
}

std::vector<std::string> analyze(std::string_view text, const PipelineConfig& config) {
    const auto tokens = tokenize(text);
    return ngrams(tokens, config.ngram_min, config.ngram_max);
}

std::vector<std::string> corpus_documents(const Corpus& corpus, const PipelineConfig& config) {
    std::vector<std::string> docs;
    docs.reserve(corpus.size());
    for (const auto& ticket : corpus.tickets()) {
        docs.push_back(build_document(ticket, config.summary_repeats));
    }
    return docs;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq,
                       std::size_t n_docs)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), n_docs_(n_docs) {
    if (terms_.size() != doc_freq_.size()) {
        throw DimensionError("vocabulary terms and doc_freq size mismatch");
    }
    index_.reserve(terms_.size());
    for (std::uint32_t i = 0; i < terms_.size(); ++i) {
        index_.emplace(terms_[i], i);
    }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view term) const {
    const auto it = index_.find(term);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Vocabulary fit_vocabulary(const std::vector<std::string>& documents,
                          const PipelineConfig& config) {
    config.validate();
    if (documents.empty()) {
        throw ValidationError("cannot fit a vocabulary on an empty corpus");
    }
    // Document frequency per term.
    std::unordered_map<std::string, std::size_t> df;
    std::unordered_set<std::string> seen;
    for (const auto& doc : documents) {
        seen.clear();
        for (auto& gram : analyze(doc, config)) {
            seen.insert(std::move(gram));
        }
        for (const auto& gram : seen) {
            ++df[gram];
        }
    }
    const std::size_t max_df =
        static_cast<std::size_t>(std::floor(config.max_df_ratio * documents.size()));
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto& [term, count] : df) {
        if (count >= config.min_df_docs && count <= max_df) {
            kept.emplace_back(term, count);
        }
    }
    if (kept.empty()) {
        throw ValidationError("vocabulary is empty after document-frequency filtering");
    }
    // Lexicographic term order keeps the index assignment independent of
    // document order.
    std::sort(kept.begin(), kept.end());
    std::vector<std::string> terms;
    std::vector<std::size_t> freqs;
    terms.reserve(kept.size());
    freqs.reserve(kept.size());
    for (auto& [term, count] : kept) {
        terms.push_back(std::move(term));
        freqs.push_back(count);
    }
    return Vocabulary(std::move(terms), std::move(freqs), documents.size());
}

Vocabulary fit_vocabulary(const Corpus& corpus, const PipelineConfig& config) {
    if (corpus.empty()) {
        throw ValidationError("cannot fit a vocabulary on an empty corpus");
    }
    return fit_vocabulary(corpus_documents(corpus, config), config);
}

SparseMatrix count_matrix(const std::vector<std::string>& documents, const Vocabulary& vocab,
                          const PipelineConfig& config) {
    SparseMatrix counts(0, vocab.size());
    std::map<std::uint32_t, double> row;  // ordered: columns come out sorted
    std::vector<SparseMatrix::Entry> entries;
    for (const auto& doc : documents) {
        row.clear();
        for (const auto& gram : analyze(doc, config)) {
            if (const auto index = vocab.index_of(gram)) {
                row[*index] += 1.0;
            }
        }
        entries.clear();
        for (const auto& [col, value] : row) {
            entries.push_back({col, value});
        }
        counts.append_row(entries);
    }
    return counts;
}

SparseMatrix count_matrix(const Corpus& corpus, const Vocabulary& vocab,
                          const PipelineConfig& config) {
    return count_matrix(corpus_documents(corpus, config), vocab, config);
}

TfidfModel fit_tfidf(const SparseMatrix& counts, const Vocabulary& vocab,
                     const PipelineConfig& config) {
    if (counts.cols() != vocab.size()) {
        throw DimensionError("count matrix columns do not match vocabulary size");
    }
    TfidfModel model;
    model.vocabulary = vocab;
    model.config = config;
    model.idf.reserve(vocab.size());
    const double n_docs = static_cast<double>(vocab.n_docs());
    for (const std::size_t df : vocab.doc_freq()) {
        model.idf.push_back(std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df))) + 1.0);
    }
    return model;
}

SparseMatrix transform_tfidf(const TfidfModel& model, const SparseMatrix& counts) {
    if (counts.cols() != model.vocabulary.size()) {
        throw DimensionError("count matrix columns do not match the fitted vocabulary");
    }
    SparseMatrix out(0, counts.cols());
    std::vector<SparseMatrix::Entry> entries;
    for (std::size_t i = 0; i < counts.rows(); ++i) {
        const auto cols = counts.row_cols(i);
        const auto vals = counts.row_values(i);
        entries.clear();
        double norm_sq = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (vals[k] < 0.0) {
                throw ValidationError("counts must be nonnegative");
            }
            if (vals[k] == 0.0) {
                continue;
            }
            const double tf = model.config.sublinear_tf ? 1.0 + std::log(vals[k]) : vals[k];
            const double weight = tf * model.idf[cols[k]];
            entries.push_back({cols[k], weight});
            norm_sq += weight * weight;
        }
        if (norm_sq > 0.0) {
            const double inv_norm = 1.0 / std::sqrt(norm_sq);
            for (auto& entry : entries) {
                entry.value *= inv_norm;
            }
        }
        out.append_row(entries);
    }
    return out;
}

SparseMatrix transform_documents(const TfidfModel& model,
                                 const std::vector<std::string>& documents) {
    return transform_tfidf(model, count_matrix(documents, model.vocabulary, model.config));
}

}  // namespace ticketclass
