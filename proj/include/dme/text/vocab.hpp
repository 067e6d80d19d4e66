#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dme/util/strings.hpp"

namespace dme::text {

// Lowercase word tokens; punctuation separates and is dropped. The empty
// string yields no tokens (callers map that to the EMPTY id).
inline std::vector<std::string> tokenize(const std::string& text) { return split_words(text); }

// Token -> dense id map with three reserved ids. Built once from the
// synthetic corpus at dataset-generation time and frozen; OOV maps to UNK.
class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kEmpty = 2;

    Vocabulary() {
        tokens_ = {"<pad>", "<unk>", "<empty>"};
        for (std::size_t i = 0; i < tokens_.size(); ++i) ids_[tokens_[i]] = static_cast<int>(i);
    }

    static Vocabulary build(std::span<const std::string> corpus) {
        std::map<std::string, int> seen;  // ordered: ids are assigned alphabetically
        for (const std::string& text : corpus)
            for (const std::string& tok : tokenize(text)) seen[tok];
        Vocabulary v;
        for (auto& [tok, _] : seen) {
            const int id = static_cast<int>(v.tokens_.size());
            v.tokens_.push_back(tok);
            v.ids_[tok] = id;
        }
        return v;
    }

    std::size_t size() const { return tokens_.size(); }

    int id(const std::string& token) const {
        auto it = ids_.find(token);
        return it == ids_.end() ? kUnk : it->second;
    }

    const std::string& token(int id) const {
        if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
            throw std::invalid_argument("Vocabulary: id " + std::to_string(id) + " out of range");
        return tokens_[static_cast<std::size_t>(id)];
    }

    // token ids for a text; empty text encodes as the single EMPTY token
    std::vector<int> encode(const std::string& text) const {
        std::vector<int> out;
        for (const std::string& tok : tokenize(text)) out.push_back(id(tok));
        if (out.empty()) out.push_back(kEmpty);
        return out;
    }

    // line-oriented "token<TAB>id", ordered by id
    void save(const std::filesystem::path& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("Vocabulary: cannot write " + path.string());
        for (std::size_t i = 0; i < tokens_.size(); ++i) out << tokens_[i] << '\t' << i << '\n';
    }

    static Vocabulary load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("Vocabulary: cannot read " + path.string());
        Vocabulary v;
        v.tokens_.clear();
        v.ids_.clear();
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw std::runtime_error("Vocabulary: " + path.string() + " line " +
                                         std::to_string(line_no) + ": missing tab");
            const std::string tok = line.substr(0, tab);
            const int id = std::stoi(line.substr(tab + 1));
            if (id != static_cast<int>(v.tokens_.size()))
                throw std::runtime_error("Vocabulary: " + path.string() + " line " +
                                         std::to_string(line_no) + ": ids must be dense");
            v.tokens_.push_back(tok);
            v.ids_[tok] = id;
        }
        if (v.tokens_.size() < 3 || v.tokens_[0] != "<pad>" || v.tokens_[1] != "<unk>" ||
            v.tokens_[2] != "<empty>")
            throw std::runtime_error("Vocabulary: " + path.string() + ": reserved ids corrupted");
        return v;
    }

    bool operator==(const Vocabulary& o) const { return tokens_ == o.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::map<std::string, int> ids_;
};

} // namespace dme::text
