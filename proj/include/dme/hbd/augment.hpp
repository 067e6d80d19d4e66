#pragma once

#include <utility>

#include "dme/decision/client.hpp"
#include "dme/decision/category.hpp"
#include "dme/hbd/dialogue.hpp"

namespace dme::hbd {

// Deterministic rewrite used when no paraphrase client is configured:
// ordered phrase substitutions plus a because-clause flip. Every phrase
// pair is chosen so the decision keyword mapping survives the rewrite.
inline std::string offline_paraphrase(const std::string& text) {
    static const std::pair<const char*, const char*> phrases[] = {
        {"keep moving forward", "continue straight ahead"},
        {"I will", "I am going to"},
        {"slow down", "reduce my speed"},
        {"speed up", "pick up speed"},
        {"turn left", "make a left turn"},
        {"turn right", "make a right turn"},
        {"change to the left lane", "move over into the left lane"},
        {"change to the right lane", "move over into the right lane"},
        {"come to a halt", "come to a standstill"},
        {"in front of me", "ahead of me"},
        {"vehicles in view", "vehicles visible"},
    };
    std::string out = text;
    for (const auto& [from, to] : phrases) {
        const std::string f(from);
        std::size_t pos = 0;
        while ((pos = out.find(f, pos)) != std::string::npos) {
            out.replace(pos, f.size(), to);
            pos += std::string(to).size();
        }
    }
    // "A because B." -> "Because B, A."
    const std::size_t because = out.find(" because ");
    const std::size_t stop = out.find('.');
    if (because != std::string::npos && stop != std::string::npos && because < stop) {
        std::string head = out.substr(0, because);
        const std::string tail = out.substr(because + 9, stop - (because + 9));
        const std::string rest = out.substr(stop);
        // demote the old sentence start, except the pronoun "I"
        if (!head.empty() && !(head[0] == 'I' && (head.size() == 1 || head[1] == ' ')))
            head[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(head[0])));
        out = "Because " + tail + ", " + head + rest;
    }
    return out;
}

struct AugmentResult {
    DialogueRecord record;
    bool rewritten = false;      // at least one turn changed
    bool rejected = false;       // rewrite flipped the decision category; original kept
    bool client_failed = false;  // transport trouble; offline rules used instead
};

// Per-turn rewrite through the paraphrase client (offline rules when
// client is null or unreachable). The content guard: any turn whose answer
// keyword-maps to a decision category must map to the same category after
// the rewrite, otherwise the whole rewrite is rejected and the original
// record kept.
inline AugmentResult augment(const DialogueRecord& record,
                             decision::TextGenerationClient* client = nullptr,
                             int max_retries = 3, decision::ClientLog* log = nullptr) {
    AugmentResult result;
    result.record = record;

    auto rewrite_turn = [&](const std::string& answer) -> std::string {
        if (client) {
            decision::GenerationRequest request;
            request.system =
                "Rewrite the driver's sentence in different words without changing its "
                "meaning. Answer with the rewritten sentence only.";
            request.turns.push_back({"user", answer});
            try {
                return decision::generate_with_retry(*client, request, max_retries, log);
            } catch (const decision::TransportError&) {
                result.client_failed = true;
            }
        }
        return offline_paraphrase(answer);
    };

    DialogueRecord rewritten = record;
    for (DialogueTurn& turn : rewritten.turns) {
        const std::string before = turn.answer;
        turn.answer = rewrite_turn(before);
        if (turn.answer != before) result.rewritten = true;

        const auto category_before = decision::category_from_text(before);
        if (category_before) {
            const auto category_after = decision::category_from_text(turn.answer);
            if (category_after != category_before) {
                result.rejected = true;
                result.rewritten = false;
                result.record = record;  // keep the original
                return result;
            }
        }
    }
    result.record = std::move(rewritten);
    return result;
}

} // namespace dme::hbd
