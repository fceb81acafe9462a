#include "ticketclass/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <iostream>

#include "ticketclass/errors.hpp"
#include "ticketclass/text.hpp"

namespace ticketclass {

using nlohmann::json;

ClassificationService::ClassificationService(ModelBundle bundle) : bundle_(std::move(bundle)) {}

ClassificationService::Prediction ClassificationService::classify(
    const std::string& summary, const std::string& description) const {
    Ticket ticket;
    ticket.summary = summary;
    ticket.description = description;
    const std::string doc = build_document(ticket, bundle_.tfidf.config.summary_repeats);
    SparseMatrix features = transform_documents(bundle_.tfidf, {doc});
    features = apply_mask(features, bundle_.mask);
    const double probability = forward(bundle_.mlp, features).front();
    return {probability >= 0.5 ? Label::BUG : Label::NBUG, probability};
}

void register_routes(httplib::Server& server,
                     std::shared_ptr<const ClassificationService> service) {
    server.Get("/health", [service](const httplib::Request&, httplib::Response& res) {
        json body = {{"status", service ? "ok" : "loading"},
                     {"model_version", service ? service->model_version() : ""}};
        res.set_content(body.dump(), "application/json");
    });

    server.Post("/classify", [service](const httplib::Request& req, httplib::Response& res) {
        if (!service) {
            res.status = 503;
            res.set_content(json{{"error", "model not loaded"}}.dump(), "application/json");
            return;
        }
        json parsed;
        try {
            parsed = json::parse(req.body);
        } catch (const json::parse_error&) {
            res.status = 400;
            res.set_content(
                json{{"error", "body must be JSON: {\"summary\": string, "
                               "\"description\": string}"}}
                    .dump(),
                "application/json");
            return;
        }
        if (!parsed.is_object() || !parsed.contains("summary") ||
            !parsed.at("summary").is_string() ||
            (parsed.contains("description") && !parsed.at("description").is_string())) {
            res.status = 400;
            res.set_content(
                json{{"error", "expected {\"summary\": string, \"description\": string}"}}
                    .dump(),
                "application/json");
            return;
        }
        const auto prediction = service->classify(parsed.at("summary").get<std::string>(),
                                                  parsed.value("description", ""));
        json body = {{"label", to_string(prediction.label)},
                     {"probability", prediction.probability},
                     {"model_version", service->model_version()}};
        res.set_content(body.dump(), "application/json");
    });
}

int run_server(const std::string& host, int port,
               std::shared_ptr<const ClassificationService> service) {
    httplib::Server server;
    register_routes(server, std::move(service));
    std::cerr << "listening on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        std::cerr << "failed to bind " << host << ":" << port << "\n";
        return 3;
    }
    return 0;
}

}  // namespace ticketclass
