#include "ticketclass/rest_client.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <mutex>

#include "ticketclass/errors.hpp"
#include "ticketclass/parallel.hpp"

namespace ticketclass {

using nlohmann::json;

namespace {

// Splits "http://host:port/some/prefix" into origin and path prefix.
std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("base URL must include a scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {url, ""};
    }
    std::string prefix = url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') {
        prefix.pop_back();
    }
    return {url.substr(0, path_start), prefix};
}

}  // namespace

ItsClient::ItsClient(RestConfig config) : config_(std::move(config)) {
    std::tie(host_, path_prefix_) = split_url(config_.base_url);
}

Ticket parse_issue_json(const std::string& body, const std::string& key) {
    json parsed;
    try {
        parsed = json::parse(body);
    } catch (const json::parse_error& e) {
        throw TransportError("invalid JSON in tracker response for " + key + ": " + e.what());
    }
    Ticket ticket;
    ticket.key = parsed.value("key", key);
    const auto fields = parsed.find("fields");
    if (fields == parsed.end() || !fields->is_object()) {
        throw TransportError("tracker response for " + key + " has no \"fields\" object");
    }
    ticket.summary = fields->value("summary", "");
    if (fields->contains("description") && fields->at("description").is_string()) {
        ticket.description = fields->at("description").get<std::string>();
    }
    if (fields->contains("issuetype") && fields->at("issuetype").is_object()) {
        ticket.type = fields->at("issuetype").value("name", "");
    }
    return ticket;
}

Ticket ItsClient::fetch_ticket(const std::string& key) const {
    if (key.empty()) {
        throw ValidationError("ticket key must be non-empty");
    }
    httplib::Client client(host_);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (const char* token = std::getenv(config_.auth_token_env.c_str()); token && *token) {
        headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    const std::string path = path_prefix_ + "/rest/api/2/issue/" + key;
    const auto res = client.Get(path, headers);
    if (!res) {
        throw TransportError("request to " + host_ + path +
                             " failed: " + httplib::to_string(res.error()) + " (retryable)");
    }
    if (res->status == 404) {
        throw NotFoundError("ticket " + key + " not found at " + host_);
    }
    if (res->status < 200 || res->status >= 300) {
        throw TransportError("tracker returned HTTP " + std::to_string(res->status) + " for " +
                             key + " (retryable)");
    }
    return parse_issue_json(res->body, key);
}

ItsClient::FetchReport ItsClient::fetch_many(const std::vector<std::string>& keys) const {
    struct Slot {
        bool ok = false;
        Ticket ticket;
        std::string reason;
    };
    std::vector<Slot> slots(keys.size());
    parallel_for(
        keys.size(),
        [&](std::size_t i) {
            try {
                slots[i].ticket = fetch_ticket(keys[i]);
                slots[i].ok = true;
            } catch (const Error& e) {
                slots[i].reason = e.what();
            }
        },
        config_.max_in_flight);

    FetchReport report;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (slots[i].ok) {
            report.tickets.push_back(std::move(slots[i].ticket));
        } else {
            report.failures.emplace_back(keys[i], slots[i].reason);
        }
    }
    return report;
}

}  // namespace ticketclass
