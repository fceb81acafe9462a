#include "ticketclass/synthetic.hpp"

#include <array>

#include "ticketclass/errors.hpp"
#include "ticketclass/rng.hpp"

namespace ticketclass {

namespace {

const std::vector<std::string>& bug_words() {
    static const std::vector<std::string> words{
        "crash",      "exception",  "nullpointer", "stacktrace", "regression", "segfault",
        "deadlock",   "overflow",   "corruption",  "hang",       "leak",       "broken",
        "incorrect",  "wrong",      "fault",       "freeze",     "panic",      "abort",
        "traceback",  "reproduce",  "defect",      "malfunction", "failure",   "flaky"};
    return words;
}

const std::vector<std::string>& nbug_words() {
    static const std::vector<std::string> words{
        "feature",   "enhancement", "documentation", "upgrade",  "refactor",  "cleanup",
        "proposal",  "request",     "improvement",   "support",  "translate", "redesign",
        "polish",    "optimize",    "simplify",      "modernize", "tutorial", "example",
        "roadmap",   "milestone",   "clarify",       "rename",   "deprecate", "convenience"};
    return words;
}

const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> words{
        "module", "server",  "client", "config",  "release", "build",   "test",   "method",
        "class",  "thread",  "index",  "query",   "parser",  "socket",  "buffer", "handler",
        "logger", "plugin",  "driver", "engine",  "widget",  "layout",  "session", "token",
        "cache",  "worker",  "packet", "stream",  "field",   "column",  "record", "schema",
        "router", "branch",  "commit", "merge",   "deploy",  "version", "adapter", "queue"};
    return words;
}

const std::string& pick(const std::vector<std::string>& words, Rng& rng) {
    return words[rng.below(words.size())];
}

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& word : words) {
        if (!out.empty()) {
            out += ' ';
        }
        out += word;
    }
    return out;
}

Ticket make_ticket(const std::string& project, std::size_t index, bool is_bug,
                   std::string summary, std::string description) {
    Ticket ticket;
    ticket.key = project + "-" + std::to_string(index + 1);
    ticket.summary = std::move(summary);
    ticket.description = std::move(description);
    ticket.classified = is_bug ? "BUG" : "IMPROVEMENT";
    ticket.type = is_bug ? "BUG" : "IMPROVEMENT";
    ticket.label = is_bug ? Label::BUG : Label::NBUG;
    return ticket;
}

}  // namespace

Corpus make_synthetic_corpus(const SyntheticConfig& config) {
    if (config.n_tickets == 0 || config.projects.empty()) {
        throw ConfigError("synthetic corpus needs tickets and at least one project");
    }
    Rng rng(config.seed);
    std::vector<Ticket> tickets;
    tickets.reserve(config.n_tickets);
    std::vector<std::size_t> per_project_count(config.projects.size(), 0);

    for (std::size_t i = 0; i < config.n_tickets; ++i) {
        const bool is_bug = rng.next_double() < config.bug_ratio;
        const auto& class_vocab = is_bug ? bug_words() : nbug_words();
        auto draw = [&]() -> const std::string& {
            if (rng.next_double() < config.noise) {
                return pick(filler_words(), rng);
            }
            return pick(class_vocab, rng);
        };

        std::vector<std::string> summary;
        const std::size_t summary_len = 3 + rng.below(3);
        for (std::size_t w = 0; w < summary_len; ++w) {
            summary.push_back(draw());
        }
        std::vector<std::string> description;
        const std::size_t body_len = 15 + rng.below(21);
        for (std::size_t w = 0; w < body_len; ++w) {
            // Descriptions mix in more filler than summaries.
            if (rng.next_double() < 0.5) {
                description.push_back(pick(filler_words(), rng));
            } else {
                description.push_back(draw());
            }
        }
        const std::size_t p = rng.below(config.projects.size());
        tickets.push_back(make_ticket(config.projects[p], per_project_count[p]++, is_bug,
                                      join_words(summary), join_words(description)));
    }
    return Corpus(std::move(tickets));
}

Corpus make_two_project_corpus(std::size_t n_tickets, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Ticket> tickets;
    tickets.reserve(n_tickets);
    std::size_t alpha_count = 0, beta_count = 0;
    for (std::size_t i = 0; i < n_tickets; ++i) {
        const bool is_bug = (i % 2) == 0;
        const bool alpha = (i % 4) < 2;  // alternate projects, both classes each
        const auto& class_vocab = is_bug ? bug_words() : nbug_words();

        std::vector<std::string> summary, description;
        if (alpha) {
            // Perfectly separable: class vocabulary only.
            for (std::size_t w = 0; w < 4; ++w) {
                summary.push_back(pick(class_vocab, rng));
            }
            for (std::size_t w = 0; w < 12; ++w) {
                description.push_back(pick(class_vocab, rng));
            }
            tickets.push_back(make_ticket("ALPHA", alpha_count++, is_bug, join_words(summary),
                                          join_words(description)));
        } else {
            // Noisy: half the words ignore the class.
            auto draw = [&]() -> const std::string& {
                if (rng.next_double() < 0.5) {
                    return pick(filler_words(), rng);
                }
                if (rng.next_double() < 0.3) {
                    return pick(is_bug ? nbug_words() : bug_words(), rng);
                }
                return pick(class_vocab, rng);
            };
            for (std::size_t w = 0; w < 4; ++w) {
                summary.push_back(draw());
            }
            for (std::size_t w = 0; w < 12; ++w) {
                description.push_back(draw());
            }
            tickets.push_back(make_ticket("BETA", beta_count++, is_bug, join_words(summary),
                                          join_words(description)));
        }
    }
    return Corpus(std::move(tickets));
}

Corpus make_trigram_signal_corpus(std::size_t n_tickets, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Ticket> tickets;
    tickets.reserve(n_tickets);
    // Both classes carry identical signal unigram counts (alpha x1, beta x2,
    // gamma x1) and the same signal bigrams ("alpha beta", "beta gamma").
    // Only BUG tickets contain the contiguous "alpha beta gamma" phrase, so
    // the class signal lives exclusively in tri-grams.
    using Chunk = std::vector<std::string>;
    for (std::size_t i = 0; i < n_tickets; ++i) {
        const bool is_bug = (i % 2) == 0;
        Chunk fillers;
        const std::size_t body_len = 12 + rng.below(8);
        for (std::size_t w = 0; w < body_len; ++w) {
            fillers.push_back(pick(filler_words(), rng));
        }
        // Chunks are spliced between filler slots in one pass, so they can
        // never interleave and no NBUG document can form the phrase.
        std::vector<std::pair<std::size_t, Chunk>> inserts;
        if (is_bug) {
            inserts.push_back({rng.below(body_len + 1), {"alpha", "beta", "gamma"}});
            inserts.push_back({rng.below(body_len + 1), {"beta"}});
        } else {
            inserts.push_back({rng.below(body_len + 1), {"alpha", "beta"}});
            inserts.push_back({rng.below(body_len + 1), {"beta", "gamma"}});
        }
        std::vector<std::string> words;
        for (std::size_t slot = 0; slot <= body_len; ++slot) {
            for (const auto& [at, chunk] : inserts) {
                if (at == slot) {
                    words.insert(words.end(), chunk.begin(), chunk.end());
                }
            }
            if (slot < body_len) {
                words.push_back(fillers[slot]);
            }
        }
        std::vector<std::string> summary;
        for (std::size_t w = 0; w < 3; ++w) {
            summary.push_back(pick(filler_words(), rng));
        }
        tickets.push_back(
            make_ticket("GAMMAPROJ", i, is_bug, join_words(summary), join_words(words)));
    }
    return Corpus(std::move(tickets));
}

}  // namespace ticketclass
