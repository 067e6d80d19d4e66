#pragma once

#include <array>
#include <cctype>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dme/util/strings.hpp"

namespace dme::hbd {

struct FirstPersonResult {
    std::string text;
    // set when the rules met a construction they do not cover (a pronoun
    // with no driver antecedent, a bare "driver" mention); the record should
    // be reviewed instead of trusted blindly
    bool needs_review = false;
};

namespace detail {

struct Piece {
    std::string text;
    bool is_word = false;
};

inline bool word_char(unsigned char c) { return std::isalpha(c) || c == '\''; }

inline std::vector<Piece> split_pieces(const std::string& text) {
    std::vector<Piece> pieces;
    std::size_t i = 0;
    while (i < text.size()) {
        const bool w = word_char(static_cast<unsigned char>(text[i]));
        std::size_t j = i;
        while (j < text.size() && word_char(static_cast<unsigned char>(text[j])) == w) ++j;
        pieces.push_back({text.substr(i, j - i), w});
        i = j;
    }
    return pieces;
}

inline bool starts_upper(const std::string& w) {
    return !w.empty() && std::isupper(static_cast<unsigned char>(w[0]));
}

inline std::string match_case(std::string replacement, const std::string& original) {
    if (replacement == "I") return replacement;  // always capitalized
    if (starts_upper(original) && !replacement.empty())
        replacement[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement[0])));
    return replacement;
}

// first-person agreement for a verb that followed a converted subject
inline std::string first_person_verb(const std::string& word) {
    static const std::unordered_map<std::string, std::string> irregular = {
        {"is", "am"},         {"was", "was"},     {"has", "have"},
        {"does", "do"},       {"goes", "go"},     {"isn't", "am not"},
        {"doesn't", "don't"}, {"wasn't", "wasn't"}, {"hasn't", "haven't"},
    };
    static const std::unordered_set<std::string> no_strip = {"its",  "this", "thus",
                                                             "yes",  "less", "across",
                                                             "alas", "as"};
    const std::string lower = to_lower(word);
    if (auto it = irregular.find(lower); it != irregular.end()) return it->second;
    if (no_strip.count(lower)) return word;
    if (lower.size() > 4 && lower.ends_with("ies")) return word.substr(0, word.size() - 3) + "y";
    for (const char* suffix : {"ses", "xes", "zes", "ches", "shes"})
        if (lower.ends_with(suffix)) return word.substr(0, word.size() - 2);
    if (lower.size() > 2 && lower.ends_with("s") && !lower.ends_with("ss"))
        return word.substr(0, word.size() - 1);
    return word;
}

inline bool skip_adverb(const std::string& word) {
    static const std::unordered_set<std::string> adverbs = {
        "always", "sometimes", "often",   "usually", "never",  "also",    "still",
        "just",   "now",       "then",    "really",  "probably", "briefly", "first",
        "carefully", "slowly", "quickly", "gently",  "calmly"};
    return adverbs.count(to_lower(word)) > 0;
}

} // namespace detail

// Rule-based pronoun conversion to the driver's first person, with verb
// re-agreement for converted subjects. Idempotent: the outputs contain no
// convertible constructions.
inline FirstPersonResult convert_first_person(const std::string& text) {
    using namespace detail;
    std::vector<Piece> pieces = split_pieces(text);
    FirstPersonResult result;

    // word-piece indices, for two-word lookahead
    std::vector<std::size_t> words;
    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].is_word) words.push_back(i);

    bool driver_seen = false;
    std::vector<bool> drop(pieces.size(), false);

    auto reagree_after = [&](std::size_t word_pos) {
        for (std::size_t wi = word_pos + 1; wi < words.size(); ++wi) {
            Piece& p = pieces[words[wi]];
            if (skip_adverb(p.text)) continue;
            p.text = first_person_verb(p.text);
            return;
        }
    };

    for (std::size_t wi = 0; wi < words.size(); ++wi) {
        Piece& p = pieces[words[wi]];
        const std::string lower = to_lower(p.text);

        if (lower == "i") {
            driver_seen = true;
            continue;
        }
        if (lower == "the" && wi + 1 < words.size()) {
            const std::string next = to_lower(pieces[words[wi + 1]].text);
            if (next == "driver's") {
                const std::string original = p.text;
                p.text = match_case("my", original);
                for (std::size_t k = words[wi] + 1; k <= words[wi + 1]; ++k) drop[k] = true;
                driver_seen = true;
                ++wi;
                continue;
            }
            if (next == "driver") {
                p.text = "I";
                for (std::size_t k = words[wi] + 1; k <= words[wi + 1]; ++k) drop[k] = true;
                driver_seen = true;
                reagree_after(wi + 1);
                ++wi;
                continue;
            }
        }
        if (lower == "he" || lower == "she" || lower == "they") {
            if (driver_seen) {
                p.text = "I";
                reagree_after(wi);
            } else {
                result.needs_review = true;
            }
            continue;
        }
        if (lower == "his" || lower == "their") {
            if (driver_seen)
                p.text = match_case("my", p.text);
            else
                result.needs_review = true;
            continue;
        }
        if (lower == "him" || lower == "them") {
            if (driver_seen)
                p.text = match_case("me", p.text);
            else
                result.needs_review = true;
            continue;
        }
        if (lower == "her") {
            if (driver_seen) {
                // possessive when a word follows, object pronoun otherwise
                const bool possessive = wi + 1 < words.size();
                p.text = match_case(possessive ? "my" : "me", p.text);
            } else {
                result.needs_review = true;
            }
            continue;
        }
        if (lower == "driver" || lower == "drivers") {
            driver_seen = true;
            result.needs_review = true;  // bare mention the rules do not cover
            continue;
        }
    }

    for (std::size_t i = 0; i < pieces.size(); ++i)
        if (!drop[i]) result.text += pieces[i].text;
    return result;
}

inline std::string to_first_person(const std::string& text) {
    return convert_first_person(text).text;
}

} // namespace dme::hbd
