#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "dme/util/strings.hpp"

namespace dme::decision {

// The eight maneuver classes. Listed order is the deterministic tie-break
// and display order throughout the repo.
enum class DecisionCategory {
    Forward,
    Accelerate,
    Decelerate,
    Stop,
    TurnLeft,
    TurnRight,
    LaneChangeLeft,
    LaneChangeRight,
};

inline constexpr int kCategoryCount = 8;

inline constexpr std::array<DecisionCategory, kCategoryCount> all_categories() {
    return {DecisionCategory::Forward,        DecisionCategory::Accelerate,
            DecisionCategory::Decelerate,     DecisionCategory::Stop,
            DecisionCategory::TurnLeft,       DecisionCategory::TurnRight,
            DecisionCategory::LaneChangeLeft, DecisionCategory::LaneChangeRight};
}

inline const std::string& category_name(DecisionCategory c) {
    static const std::array<std::string, kCategoryCount> names = {
        "forward",   "accelerate", "decelerate",       "stop",
        "turn_left", "turn_right", "lane_change_left", "lane_change_right"};
    return names[static_cast<std::size_t>(c)];
}

inline std::optional<DecisionCategory> parse_category(const std::string& name) {
    for (DecisionCategory c : all_categories())
        if (category_name(c) == name) return c;
    return std::nullopt;
}

inline DecisionCategory parse_category_or_throw(const std::string& name) {
    if (auto c = parse_category(name)) return *c;
    throw std::invalid_argument("unknown decision category: '" + name + "'");
}

// Keyword mapping from free decision text to a category. Order matters:
// lane changes are checked before turns ("change to the left lane" must not
// read as a left turn), and stop/speed words before the generic forward
// vocabulary.
inline std::optional<DecisionCategory> category_from_text(const std::string& text) {
    const std::string t = to_lower(text);
    const bool left = contains_word(t, "left");
    const bool right = contains_word(t, "right");
    if (contains_word(t, "lane") && (left || right))
        return left ? DecisionCategory::LaneChangeLeft : DecisionCategory::LaneChangeRight;
    if (contains_word(t, "turn") && (left || right))
        return left ? DecisionCategory::TurnLeft : DecisionCategory::TurnRight;
    if (contains_word(t, "stop") || contains_word(t, "halt")) return DecisionCategory::Stop;
    if (contains_word(t, "accelerate") || contains_word(t, "speed up") ||
        contains_word(t, "faster") || contains_word(t, "pick up speed"))
        return DecisionCategory::Accelerate;
    if (contains_word(t, "slow") || contains_word(t, "decelerate") ||
        contains_word(t, "brake") || contains_word(t, "reduce"))
        return DecisionCategory::Decelerate;
    if (contains_word(t, "forward") || contains_word(t, "straight") ||
        contains_word(t, "continue") || contains_word(t, "keep") || contains_word(t, "ahead"))
        return DecisionCategory::Forward;
    return std::nullopt;
}

} // namespace dme::decision
