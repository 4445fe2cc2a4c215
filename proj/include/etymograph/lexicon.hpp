#ifndef ETYMOGRAPH_LEXICON_HPP
#define ETYMOGRAPH_LEXICON_HPP

#include <algorithm>
#include <cstddef>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "etymograph/unicode.hpp"

namespace etymograph {

// One lexicon record: a word and its ordered etymological roots. Repeated
// roots (e.g. a word built from the same character twice) are kept here with
// multiplicity; the graph collapses them to a single edge.
struct LexiconEntry {
    std::string word;
    std::vector<std::string> roots;  // length >= 1, no empty root
};

struct ParseResult {
    std::vector<LexiconEntry> entries;
    std::size_t merged_lines = 0;  // duplicate words folded by union-of-roots
};

namespace detail {

inline std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace detail

// Parses the canonical lexicon format: UTF-8 text, one record per line,
// `word<TAB>root1 root2 ... rootN`, `#` starts a comment line. Words and
// roots are NFC-normalized. Duplicate words merge with the union of their
// roots in first-seen order.
inline ParseResult parse_lexicon(std::istream& in) {
    ParseResult result;
    std::unordered_map<std::string, std::size_t> seen;  // word -> entry index
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = detail::trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                                     ": missing tab separator");
        std::string word = nfc(detail::trim(line.substr(0, tab)));
        if (word.empty())
            throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                                     ": empty word");

        std::vector<std::string> roots;
        std::istringstream root_stream(line.substr(tab + 1));
        std::string tok;
        while (root_stream >> tok) roots.push_back(nfc(tok));
        if (roots.empty())
            throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                                     ": empty roots field");

        auto it = seen.find(word);
        if (it == seen.end()) {
            seen.emplace(word, result.entries.size());
            result.entries.push_back({std::move(word), std::move(roots)});
        } else {
            auto& existing = result.entries[it->second].roots;
            for (auto& r : roots)
                if (std::find(existing.begin(), existing.end(), r) == existing.end())
                    existing.push_back(std::move(r));
            ++result.merged_lines;
        }
    }
    return result;
}

}  // namespace etymograph

#endif
