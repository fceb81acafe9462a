#include "ticketclass/ticket.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "ticketclass/errors.hpp"

namespace ticketclass {

using nlohmann::json;

const char* to_string(Label label) {
    return label == Label::BUG ? "BUG" : "NBUG";
}

Label label_from_string(const std::string& text) {
    if (text == "BUG") {
        return Label::BUG;
    }
    if (text == "NBUG") {
        return Label::NBUG;
    }
    throw ValidationError("unknown label \"" + text + "\" (expected BUG or NBUG)");
}

Corpus::Corpus(std::vector<Ticket> tickets) : tickets_(std::move(tickets)) {
    std::unordered_set<std::string> seen;
    seen.reserve(tickets_.size());
    for (const auto& ticket : tickets_) {
        if (ticket.key.empty()) {
            throw ValidationError("ticket with empty key");
        }
        if (!seen.insert(ticket.key).second) {
            throw ValidationError("duplicate ticket key \"" + ticket.key + "\"");
        }
    }
}

std::vector<int> Corpus::labels() const {
    std::vector<int> y;
    y.reserve(tickets_.size());
    for (const auto& ticket : tickets_) {
        y.push_back(ticket.label == Label::BUG ? 1 : 0);
    }
    return y;
}

std::string Corpus::project_of(const std::string& key) {
    const auto dash = key.find('-');
    return dash == std::string::npos ? key : key.substr(0, dash);
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
    return 1 + static_cast<std::size_t>(
                   std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n'));
}

std::string require_string(const json& object, const char* field, const std::string& origin) {
    const auto it = object.find(field);
    if (it == object.end()) {
        throw ValidationError(origin + ": ticket object missing field \"" + field + "\"");
    }
    if (!it->is_string()) {
        throw ValidationError(origin + ": field \"" + field + "\" must be a string");
    }
    return it->get<std::string>();
}

Ticket ticket_from_json(const json& object, const std::string& origin) {
    static const std::unordered_set<std::string> known{"key",        "summary", "description",
                                                       "classified", "type",    "label"};
    if (!object.is_object()) {
        throw ValidationError(origin + ": corpus elements must be JSON objects");
    }
    for (const auto& [field, value] : object.items()) {
        (void)value;
        if (!known.contains(field)) {
            throw ValidationError(origin + ": unknown ticket field \"" + field + "\"");
        }
    }
    Ticket ticket;
    ticket.key = require_string(object, "key", origin);
    ticket.summary = require_string(object, "summary", origin);
    if (object.contains("description") && !object.at("description").is_null()) {
        if (!object.at("description").is_string()) {
            throw ValidationError(origin + ": field \"description\" must be a string");
        }
        ticket.description = object.at("description").get<std::string>();
    }
    ticket.classified = require_string(object, "classified", origin);
    ticket.type = require_string(object, "type", origin);
    ticket.label = label_from_string(require_string(object, "label", origin));
    return ticket;
}

}  // namespace

Corpus parse_corpus_json(const std::string& text, const std::string& origin) {
    json parsed;
    try {
        parsed = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": malformed JSON near line " +
                         std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
    }
    if (!parsed.is_array()) {
        throw ValidationError(origin + ": corpus file must be a JSON array");
    }
    std::vector<Ticket> tickets;
    tickets.reserve(parsed.size());
    for (const auto& element : parsed) {
        tickets.push_back(ticket_from_json(element, origin));
    }
    return Corpus(std::move(tickets));
}

Corpus load_corpus(const std::string& path) {
    return parse_corpus_json(read_file(path), path);
}

std::string corpus_to_json(const Corpus& corpus) {
    json out = json::array();
    for (const auto& ticket : corpus.tickets()) {
        out.push_back(json{{"key", ticket.key},
                           {"summary", ticket.summary},
                           {"description", ticket.description},
                           {"classified", ticket.classified},
                           {"type", ticket.type},
                           {"label", to_string(ticket.label)}});
    }
    return out.dump(2);
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write file: " + path);
    }
    out << corpus_to_json(corpus) << '\n';
}

std::map<std::string, std::string> parse_curation(const std::string& text,
                                                  const std::string& origin) {
    std::map<std::string, std::string> curation;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError(origin + ":" + std::to_string(line_no) +
                             ": expected \"key<TAB>classification\"");
        }
        const std::string key = line.substr(0, tab);
        std::string classified = line.substr(tab + 1);
        while (!classified.empty() && (classified.back() == ' ' || classified.back() == '\t')) {
            classified.pop_back();
        }
        if (key.empty() || classified.empty()) {
            throw ParseError(origin + ":" + std::to_string(line_no) +
                             ": empty key or classification");
        }
        if (curation.contains(key) && curation.at(key) != classified) {
            throw ValidationError(origin + ": conflicting classifications for key \"" + key + "\"");
        }
        curation[key] = classified;
    }
    return curation;
}

std::map<std::string, std::string> load_curation_file(const std::string& path) {
    return parse_curation(read_file(path), path);
}

Corpus attach_labels(std::vector<Ticket> raw,
                     const std::map<std::string, std::string>& curation) {
    std::vector<std::string> missing;
    for (auto& ticket : raw) {
        const auto it = curation.find(ticket.key);
        if (it == curation.end()) {
            missing.push_back(ticket.key);
            continue;
        }
        ticket.classified = it->second;
        ticket.label = it->second == "BUG" ? Label::BUG : Label::NBUG;
    }
    if (!missing.empty()) {
        std::string joined;
        for (const auto& key : missing) {
            joined += joined.empty() ? key : ", " + key;
        }
        throw ValidationError("unlabeled tickets (missing from curation map): " + joined);
    }
    return Corpus(std::move(raw));
}

CorpusStats corpus_stats(const Corpus& corpus) {
    std::map<std::string, ProjectStats> per_project;
    CorpusStats stats;
    stats.total.project = "total";
    for (const auto& ticket : corpus.tickets()) {
        auto& row = per_project[Corpus::project_of(ticket.key)];
        row.n_reports += 1;
        (ticket.label == Label::BUG ? row.n_bug : row.n_nbug) += 1;
        stats.total.n_reports += 1;
        (ticket.label == Label::BUG ? stats.total.n_bug : stats.total.n_nbug) += 1;
    }
    for (auto& [project, row] : per_project) {
        row.project = project;
        stats.projects.push_back(row);
    }
    return stats;
}

std::string stats_to_tsv(const CorpusStats& stats) {
    std::ostringstream out;
    out << "project\treports\tbug\tnbug\n";
    for (const auto& row : stats.projects) {
        out << row.project << '\t' << row.n_reports << '\t' << row.n_bug << '\t' << row.n_nbug
            << '\n';
    }
    out << stats.total.project << '\t' << stats.total.n_reports << '\t' << stats.total.n_bug
        << '\t' << stats.total.n_nbug << '\n';
    return out.str();
}

}  // namespace ticketclass
