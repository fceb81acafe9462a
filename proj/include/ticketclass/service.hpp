#pragma once

#include <memory>
#include <string>

#include "ticketclass/model_io.hpp"
#include "ticketclass/ticket.hpp"

namespace httplib {
class Server;
}

namespace ticketclass {

// Immutable classification front-end over a loaded model bundle; safe to
// share across request handler threads.
class ClassificationService {
public:
    explicit ClassificationService(ModelBundle bundle);

    struct Prediction {
        Label label = Label::NBUG;
        double probability = 0.0;  // probability of BUG
    };

    Prediction classify(const std::string& summary, const std::string& description) const;
    const std::string& model_version() const { return bundle_.model_version; }

private:
    ModelBundle bundle_;
};

// POST /classify {"summary": ..., "description": ...}
//   -> {"label": "BUG"|"NBUG", "probability": p, "model_version": v}
//   400 on malformed bodies, 503 while no model is loaded.
// GET /health -> {"status": "ok"|"loading", "model_version": v}
void register_routes(httplib::Server& server,
                     std::shared_ptr<const ClassificationService> service);

// Blocks serving until the process is stopped. Returns an exit code.
int run_server(const std::string& host, int port,
               std::shared_ptr<const ClassificationService> service);

}  // namespace ticketclass
