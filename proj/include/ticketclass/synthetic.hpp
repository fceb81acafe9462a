#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ticketclass/ticket.hpp"

namespace ticketclass {

// Deterministic synthetic corpora for desk-scale experiments and tests.
struct SyntheticConfig {
    std::size_t n_tickets = 400;
    std::vector<std::string> projects = {"ALPHA", "BRAVO"};
    double bug_ratio = 0.5;
    // Fraction of class-specific words replaced by shared filler; raise it to
    // make the problem harder.
    double noise = 0.15;
    std::uint64_t seed = 0;
};

// Tickets whose summaries and descriptions draw from class-discriminative
// vocabularies plus shared filler words.
Corpus make_synthetic_corpus(const SyntheticConfig& config);

// Two projects: the first is perfectly separable (disjoint class vocabulary),
// the second is noisy.
Corpus make_two_project_corpus(std::size_t n_tickets, std::uint64_t seed);

// Both classes use the same word set; only BUG tickets contain a fixed
// three-word phrase in order, so the signal lives in tri-grams.
Corpus make_trigram_signal_corpus(std::size_t n_tickets, std::uint64_t seed);

}  // namespace ticketclass
