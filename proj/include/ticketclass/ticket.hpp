#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ticketclass {

enum class Label : std::uint8_t { NBUG = 0, BUG = 1 };

const char* to_string(Label label);
Label label_from_string(const std::string& text);  // throws ValidationError

// One issue record. `classified` is the curated category (e.g. "IMPROVEMENT");
// the binary label is BUG exactly when classified == "BUG".
struct Ticket {
    std::string key;
    std::string summary;
    std::string description;
    std::string classified;
    std::string type;
    Label label = Label::NBUG;

    bool operator==(const Ticket&) const = default;
};

struct ProjectStats {
    std::string project;
    std::size_t n_reports = 0;
    std::size_t n_bug = 0;
    std::size_t n_nbug = 0;
};

struct CorpusStats {
    std::vector<ProjectStats> projects;  // sorted by project name
    ProjectStats total;
};

// Ordered, immutable ticket collection with unique keys.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<Ticket> tickets);  // validates key uniqueness

    const std::vector<Ticket>& tickets() const { return tickets_; }
    std::size_t size() const { return tickets_.size(); }
    bool empty() const { return tickets_.empty(); }

    // Binary label vector, 1 = BUG.
    std::vector<int> labels() const;

    // Project name is the key prefix before the first '-'.
    static std::string project_of(const std::string& key);

private:
    std::vector<Ticket> tickets_;
};

// Corpus file: UTF-8 JSON array, each element exactly the six ticket fields.
// A missing description becomes the empty string; unknown fields are rejected.
Corpus load_corpus(const std::string& path);
Corpus parse_corpus_json(const std::string& text, const std::string& origin);
void save_corpus(const Corpus& corpus, const std::string& path);
std::string corpus_to_json(const Corpus& corpus);

// Curation file: one "key<TAB>classification" per line, '#' starts a comment.
std::map<std::string, std::string> load_curation_file(const std::string& path);
std::map<std::string, std::string> parse_curation(const std::string& text,
                                                  const std::string& origin);

// Labels raw (unlabeled) tickets from a key -> classification map. Every key
// must be present in the map; offenders are listed in the error.
Corpus attach_labels(std::vector<Ticket> raw,
                     const std::map<std::string, std::string>& curation);

CorpusStats corpus_stats(const Corpus& corpus);
std::string stats_to_tsv(const CorpusStats& stats);

}  // namespace ticketclass
