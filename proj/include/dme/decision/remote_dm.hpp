#pragma once

#include <sstream>

#include "dme/decision/client.hpp"
#include "dme/decision/driver_logic.hpp"

namespace dme::decision {

struct RemoteDecisionResult {
    DriverLogicOutput logic;
    bool used_fallback = false;   // scripted stand-in answered instead
    std::string warning;          // nonempty when something went sideways
};

inline std::string scene_summary(const sim::Scene& scene) {
    std::ostringstream out;
    out << "Status: moving at " << scene.ego.speed << " m/s in a straight lane "
        << scene.lane.width << " m wide. " << scene.agents.size()
        << " other vehicles nearby:";
    for (const sim::Agent& a : scene.agents)
        out << " (x=" << a.position.x << ", y=" << a.position.y << ", vx=" << a.velocity.x
            << ", vy=" << a.velocity.y << ")";
    return out.str();
}

// Asks the client the four questions in dialogue order (gaze, description,
// reasoning, decision), each turn seeing the previous answers. The decision
// answer is keyword-mapped to a category; on a transport failure that
// survives retries or an unparseable decision, the scripted stand-in
// answers instead and the result is flagged.
inline RemoteDecisionResult remote_decision_maker(const sim::Scene& scene,
                                                  TextGenerationClient& client,
                                                  int max_retries = 3, ClientLog* log = nullptr) {
    static const char* kQuestions[4] = {
        "Where are you looking right now, and why?",
        "Describe the driving scene around you.",
        "Walk me through your reasoning about what to do next.",
        "What is your driving decision?",
    };

    GenerationRequest request;
    request.system =
        "You are the driver of this vehicle. Answer every question in the first person, "
        "in one or two sentences. " +
        scene_summary(scene);

    std::array<std::string, 4> answers;
    try {
        for (int i = 0; i < 4; ++i) {
            request.turns.push_back({"user", kQuestions[i]});
            answers[i] = generate_with_retry(client, request, max_retries, log);
            request.turns.push_back({"assistant", answers[i]});
        }
    } catch (const TransportError& e) {
        return {scripted_decision_maker(scene), true,
                std::string("remote decision-maker unreachable (") + e.what() +
                    "); using scripted fallback"};
    }

    const auto category = category_from_text(answers[3]);
    if (!category) {
        return {scripted_decision_maker(scene), true,
                "remote decision text did not map to any category: '" + answers[3] +
                    "'; using scripted fallback"};
    }

    DriverLogicOutput out;
    out.gaze_text = answers[0];
    out.description_text = answers[1];
    out.reasoning_text = answers[2];
    out.decision_text = answers[3];
    out.category = *category;
    return {out, false, ""};
}

} // namespace dme::decision
