#pragma once

#include <algorithm>
#include <map>

#include "dme/decision/client.hpp"
#include "dme/decision/driver_logic.hpp"
#include "dme/text/vocab.hpp"

namespace dme::eval {

// 0..1 score per assessment dimension.
struct JudgeScore {
    double gaze = 0.0;
    double scene_understanding = 0.0;
    double reasoning = 0.0;
    double decision = 0.0;
};

// multiset token-overlap F1 in [0, 1]; 1 for identical token streams
inline double token_f1(const std::string& a, const std::string& b) {
    const auto ta = text::tokenize(a);
    const auto tb = text::tokenize(b);
    if (ta.empty() && tb.empty()) return 1.0;
    if (ta.empty() || tb.empty()) return 0.0;
    std::map<std::string, int> counts;
    for (const auto& t : ta) ++counts[t];
    int overlap = 0;
    for (const auto& t : tb) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    if (overlap == 0) return 0.0;
    const double precision = static_cast<double>(overlap) / static_cast<double>(tb.size());
    const double recall = static_cast<double>(overlap) / static_cast<double>(ta.size());
    return 2.0 * precision * recall / (precision + recall);
}

class Judge {
public:
    virtual ~Judge() = default;
    virtual JudgeScore score(const decision::DriverLogicOutput& pred,
                             const decision::DriverLogicOutput& ref) = 0;
};

// Deterministic stand-in for an LLM judge: token-F1 per dimension, except
// the decision dimension which is 1.0 on a category match and half the
// token-F1 otherwise.
class OfflineJudge : public Judge {
public:
    JudgeScore score(const decision::DriverLogicOutput& pred,
                     const decision::DriverLogicOutput& ref) override {
        JudgeScore s;
        s.gaze = token_f1(pred.gaze_text, ref.gaze_text);
        s.scene_understanding = token_f1(pred.description_text, ref.description_text);
        s.reasoning = token_f1(pred.reasoning_text, ref.reasoning_text);
        s.decision = pred.category == ref.category
                         ? 1.0
                         : 0.5 * token_f1(pred.decision_text, ref.decision_text);
        return s;
    }
};

// Asks a remote model for the four scores; any failure (transport after
// retries, unparseable reply, out-of-range values) falls back to the
// offline judge.
class RemoteJudge : public Judge {
public:
    explicit RemoteJudge(decision::TextGenerationClient& client, int max_retries = 3,
                         decision::ClientLog* log = nullptr)
        : client_(client), max_retries_(max_retries), log_(log) {}

    JudgeScore score(const decision::DriverLogicOutput& pred,
                     const decision::DriverLogicOutput& ref) override {
        decision::GenerationRequest request;
        request.system =
            "You are grading a driving assistant. For each dimension give a line "
            "'<dimension>: <score>' with a score from 0 to 1. Dimensions: gaze, scene, "
            "reasoning, decision.";
        request.turns.push_back(
            {"user", "Reference gaze: " + ref.gaze_text + "\nReference scene: " +
                         ref.description_text + "\nReference reasoning: " + ref.reasoning_text +
                         "\nReference decision: " + ref.decision_text +
                         "\nPredicted gaze: " + pred.gaze_text + "\nPredicted scene: " +
                         pred.description_text + "\nPredicted reasoning: " + pred.reasoning_text +
                         "\nPredicted decision: " + pred.decision_text});
        try {
            const std::string reply =
                decision::generate_with_retry(client_, request, max_retries_, log_);
            if (auto parsed = parse_reply(reply)) return *parsed;
        } catch (const decision::TransportError&) {
        }
        return fallback_.score(pred, ref);
    }

private:
    static std::optional<JudgeScore> parse_reply(const std::string& reply) {
        auto grab = [&](const std::string& key) -> std::optional<double> {
            const auto pos = to_lower(reply).find(key + ":");
            if (pos == std::string::npos) return std::nullopt;
            try {
                const double v = std::stod(reply.substr(pos + key.size() + 1));
                if (v < 0.0 || v > 1.0) return std::nullopt;
                return v;
            } catch (const std::exception&) {
                return std::nullopt;
            }
        };
        const auto g = grab("gaze"), s = grab("scene"), r = grab("reasoning"),
                   d = grab("decision");
        if (!g || !s || !r || !d) return std::nullopt;
        return JudgeScore{*g, *s, *r, *d};
    }

    decision::TextGenerationClient& client_;
    int max_retries_;
    decision::ClientLog* log_;
    OfflineJudge fallback_;
};

inline JudgeScore judge_logic(const decision::DriverLogicOutput& pred,
                              const decision::DriverLogicOutput& ref, Judge& judge) {
    return judge.score(pred, ref);
}

} // namespace dme::eval
