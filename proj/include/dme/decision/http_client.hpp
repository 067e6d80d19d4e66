#pragma once

#include <cstdlib>

#include <httplib.h>

#include "dme/decision/client.hpp"

namespace dme::decision {

// POSTs {"system": ..., "turns": [{"role", "text"}...]} to the endpoint and
// expects {"text": "..."} back. The bearer token is read from an
// environment variable so credentials never land in config files.
class HttpTextClient : public TextGenerationClient {
public:
    HttpTextClient(std::string host, std::string path, std::string token_env = "DME_CLIENT_TOKEN")
        : host_(std::move(host)), path_(std::move(path)), token_env_(std::move(token_env)) {}

    std::string generate(const GenerationRequest& request) override {
        httplib::Client client(host_);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        httplib::Headers headers;
        if (const char* token = std::getenv(token_env_.c_str()))
            headers.emplace("Authorization", std::string("Bearer ") + token);

        nlohmann::ordered_json turns = nlohmann::ordered_json::array();
        for (const ChatTurn& t : request.turns)
            turns.push_back({{"role", t.role}, {"text", t.text}});
        const nlohmann::ordered_json body{{"system", request.system}, {"turns", std::move(turns)}};

        auto res = client.Post(path_, headers, body.dump(), "application/json");
        if (!res)
            throw TransportError("HTTP request to " + host_ + path_ + " failed: " +
                                 httplib::to_string(res.error()));
        if (res->status < 200 || res->status >= 300)
            throw TransportError("HTTP " + std::to_string(res->status) + " from " + host_ + path_);
        try {
            return nlohmann::json::parse(res->body).at("text").get<std::string>();
        } catch (const std::exception& e) {
            throw TransportError(std::string("malformed response body: ") + e.what());
        }
    }

private:
    std::string host_;
    std::string path_;
    std::string token_env_;
};

} // namespace dme::decision
