#pragma once

#include <algorithm>
#include <optional>
#include <span>

#include "dme/hbd/first_person.hpp"

namespace dme::hbd {

enum class DialogueSource { look_both_ways, bdd_x, nuscenes, virtual_hbd, synthetic };

inline const std::string& source_name(DialogueSource s) {
    static const std::array<std::string, 5> names = {"look_both_ways", "bdd_x", "nuscenes",
                                                     "virtual_hbd", "synthetic"};
    return names[static_cast<std::size_t>(s)];
}

inline std::optional<DialogueSource> parse_source(const std::string& name) {
    for (DialogueSource s : {DialogueSource::look_both_ways, DialogueSource::bdd_x,
                             DialogueSource::nuscenes, DialogueSource::virtual_hbd,
                             DialogueSource::synthetic})
        if (source_name(s) == name) return s;
    return std::nullopt;
}

// open-source records carry one to three turns; virtual/synthetic up to five
inline int turn_limit(DialogueSource s) {
    switch (s) {
        case DialogueSource::look_both_ways:
        case DialogueSource::bdd_x:
        case DialogueSource::nuscenes: return 3;
        case DialogueSource::virtual_hbd:
        case DialogueSource::synthetic: return 5;
    }
    throw std::logic_error("turn_limit: unreachable");
}

// canonical per-scene Q/A order
enum class PartType { Gaze, Description, Reasoning, Decision, ControlSignal };

inline const std::string& part_question(PartType t) {
    static const std::array<std::string, 5> questions = {
        "Where are you looking right now?",
        "Describe the driving scene around you.",
        "Why do you act the way you do here?",
        "What do you decide to do next?",
        "What control signals do you apply?",
    };
    return questions[static_cast<std::size_t>(t)];
}

struct DialoguePart {
    PartType type = PartType::Gaze;
    std::string answer;
};

struct DialogueTurn {
    std::string question;
    std::string answer;
    bool operator==(const DialogueTurn&) const = default;
};

struct DialogueRecord {
    DialogueSource source = DialogueSource::synthetic;
    std::string scene_id;
    std::vector<DialogueTurn> turns;
    bool needs_review = false;

    bool operator==(const DialogueRecord&) const = default;
};

struct AssembleResult {
    DialogueRecord record;
    bool truncated = false;  // turn count exceeded the source limit
};

// Orders parts canonically (gaze, description, reasoning, decision,
// control signal), converts every answer to the first person, and truncates
// to the source's turn limit.
inline AssembleResult assemble_dialogue(std::span<const DialoguePart> parts,
                                        DialogueSource source, const std::string& scene_id) {
    if (parts.empty())
        throw std::invalid_argument("assemble_dialogue: at least one part is required");

    std::vector<DialoguePart> ordered(parts.begin(), parts.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        return static_cast<int>(a.type) < static_cast<int>(b.type);
    });

    AssembleResult result;
    result.record.source = source;
    result.record.scene_id = scene_id;
    const int limit = turn_limit(source);
    for (const DialoguePart& part : ordered) {
        if (static_cast<int>(result.record.turns.size()) >= limit) {
            result.truncated = true;
            break;
        }
        FirstPersonResult converted = convert_first_person(part.answer);
        result.record.needs_review = result.record.needs_review || converted.needs_review;
        result.record.turns.push_back({part_question(part.type), converted.text});
    }
    return result;
}

} // namespace dme::hbd
