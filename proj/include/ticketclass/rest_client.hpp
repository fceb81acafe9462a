#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ticketclass/ticket.hpp"

namespace ticketclass {

struct RestConfig {
    std::string base_url;  // e.g. "http://issues.example.org"
    // Bearer token read from this environment variable when set.
    std::string auth_token_env = "TICKETCLASS_ITS_TOKEN";
    int timeout_seconds = 15;
    std::size_t max_in_flight = 4;
};

// Minimal issue-tracker REST client (Jira wire format). Fetched tickets carry
// no curated classification or label; attach_labels supplies those.
class ItsClient {
public:
    explicit ItsClient(RestConfig config);

    // GET issue-by-key. Throws TransportError (retryable) on network failure
    // and NotFoundError when the tracker does not know the key.
    Ticket fetch_ticket(const std::string& key) const;

    struct FetchReport {
        std::vector<Ticket> tickets;                            // in key order
        std::vector<std::pair<std::string, std::string>> failures;  // key, reason
    };

    // Fetches keys with bounded parallelism; failures are collected, not fatal.
    FetchReport fetch_many(const std::vector<std::string>& keys) const;

    const RestConfig& config() const { return config_; }

private:
    RestConfig config_;
    std::string host_;  // scheme://authority
    std::string path_prefix_;
};

// Parses a Jira-style issue JSON payload into an unlabeled ticket.
Ticket parse_issue_json(const std::string& body, const std::string& key);

}  // namespace ticketclass
