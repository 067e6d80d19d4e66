#pragma once

#include <cstdlib>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dme::decision {

struct ChatTurn {
    std::string role;  // "system" | "user" | "assistant"
    std::string text;
};

struct GenerationRequest {
    std::string system;
    std::vector<ChatTurn> turns;
};

// Transport-level failure: timeouts, connection errors, non-2xx responses.
// Retriable; carries the attempt count once the retry wrapper gives up.
class TransportError : public std::runtime_error {
public:
    explicit TransportError(const std::string& what, int attempts = 1)
        : std::runtime_error(what), attempts_(attempts) {}
    int attempts() const { return attempts_; }

private:
    int attempts_;
};

// Contract for any external text generator (Decision-Maker LVLM, paraphrase
// model, remote judge). Implementations may block on the network and must
// not be called from the training loop's hot path.
class TextGenerationClient {
public:
    virtual ~TextGenerationClient() = default;
    virtual std::string generate(const GenerationRequest& request) = 0;
};

// Line-delimited request/response audit log, one JSON record per exchange.
class ClientLog {
public:
    ClientLog() = default;
    explicit ClientLog(const std::string& path) : out_(std::make_unique<std::ofstream>(path)) {
        if (!*out_) throw std::runtime_error("ClientLog: cannot write " + path);
    }

    void record(const GenerationRequest& req, const std::string& response, bool ok) {
        if (!out_) return;
        nlohmann::ordered_json turns = nlohmann::ordered_json::array();
        for (const ChatTurn& t : req.turns) turns.push_back({{"role", t.role}, {"text", t.text}});
        nlohmann::ordered_json j{{"system", req.system},
                                 {"turns", std::move(turns)},
                                 {"ok", ok},
                                 {"response", response}};
        *out_ << j.dump() << '\n';
        out_->flush();
    }

private:
    std::unique_ptr<std::ofstream> out_;
};

// Retries transport failures up to max_retries attempts in total; other
// exceptions pass through. Every exchange (including failures) is logged.
inline std::string generate_with_retry(TextGenerationClient& client,
                                       const GenerationRequest& request, int max_retries = 3,
                                       ClientLog* log = nullptr) {
    std::string last_error;
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        try {
            std::string response = client.generate(request);
            if (log) log->record(request, response, true);
            return response;
        } catch (const TransportError& e) {
            last_error = e.what();
            if (log) log->record(request, std::string("transport error: ") + e.what(), false);
        }
    }
    throw TransportError("gave up after " + std::to_string(max_retries) +
                             " attempts; last error: " + last_error,
                         max_retries);
}

} // namespace dme::decision
