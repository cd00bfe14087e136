#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace posc {

/// Index of a symbol within a problem alphabet.
using SymbolCode = int32_t;

/// A finite alphabet mapping printable glyphs to dense symbol codes.
///
/// The glyph<->code mapping is a bijection; codes are assigned densely in
/// insertion order so they can be used directly as integer values in
/// arithmetic formulas.
class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(const std::string& glyphs) {
        for (char g : glyphs) add(g);
    }

    SymbolCode add(char glyph) {
        auto it = code_of_.find(glyph);
        if (it != code_of_.end()) return it->second;
        SymbolCode code = static_cast<SymbolCode>(glyph_of_.size());
        glyph_of_.push_back(glyph);
        code_of_.emplace(glyph, code);
        return code;
    }

    bool contains(char glyph) const { return code_of_.count(glyph) != 0; }

    SymbolCode code(char glyph) const {
        auto it = code_of_.find(glyph);
        if (it == code_of_.end())
            throw std::out_of_range(std::string("symbol not in alphabet: '") + glyph + "'");
        return it->second;
    }

    char glyph(SymbolCode code) const {
        if (code < 0 || static_cast<size_t>(code) >= glyph_of_.size())
            throw std::out_of_range("symbol code out of range");
        return glyph_of_[static_cast<size_t>(code)];
    }

    size_t size() const { return glyph_of_.size(); }

    const std::vector<char>& glyphs() const { return glyph_of_; }

private:
    std::vector<char> glyph_of_;
    std::map<char, SymbolCode> code_of_;
};

/// A word is a sequence of symbol codes, indexed from 0.
using Word = std::vector<SymbolCode>;

inline Word word_from(const Alphabet& sigma, const std::string& text) {
    Word w;
    w.reserve(text.size());
    for (char g : text) w.push_back(sigma.code(g));
    return w;
}

inline std::string word_to_string(const Alphabet& sigma, const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (SymbolCode c : w) s.push_back(sigma.glyph(c));
    return s;
}

}  // namespace posc
