#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "posc/alphabet.hpp"

namespace posc {

/// Index of a string variable within a problem (declaration order gives the
/// fixed variable order used for concatenating blocks).
using VarId = int32_t;

/// Index of a position constraint within a system.
using ConstraintId = int32_t;

enum class Side : uint8_t { L = 0, R = 1 };

inline char side_letter(Side s) { return s == Side::L ? 'L' : 'R'; }

/// Tags counted on tag-automaton transitions.
///
/// Sym(a)              the symbol read by the transition
/// Len(x)              one letter of variable x's word
/// Pos(i, x)           one letter of x read while in copy i
/// Mis(i, x, d, s, a)  level-i sample of symbol a in x for side s of
///                     constraint d
/// Cop(i, x, d, s)     level-i reuse of x's previous sample for side s of
///                     constraint d
struct Tag {
    enum class Kind : uint8_t { Sym, Len, Pos, Mis, Cop };

    Kind kind;
    int32_t level = 0;       // Pos: 1..2K+1, Mis: 1..2K, Cop: 2..2K
    VarId var = -1;          // Len/Pos/Mis/Cop
    ConstraintId cid = -1;   // Mis/Cop
    Side side = Side::L;     // Mis/Cop
    SymbolCode sym = -1;     // Sym/Mis

    static Tag symbol(SymbolCode a) { return {Kind::Sym, 0, -1, -1, Side::L, a}; }
    static Tag len(VarId x) { return {Kind::Len, 0, x, -1, Side::L, -1}; }
    static Tag pos(int32_t level, VarId x) { return {Kind::Pos, level, x, -1, Side::L, -1}; }
    static Tag mis(int32_t level, VarId x, ConstraintId d, Side s, SymbolCode a) {
        return {Kind::Mis, level, x, d, s, a};
    }
    static Tag cop(int32_t level, VarId x, ConstraintId d, Side s) {
        return {Kind::Cop, level, x, d, s, -1};
    }

    auto operator<=>(const Tag&) const = default;
};

/// Canonical text form, used for formula variable names and debug dumps.
inline std::string tag_name(const Tag& t, const Alphabet& sigma) {
    switch (t.kind) {
        case Tag::Kind::Sym:
            return std::string("S:") + sigma.glyph(t.sym);
        case Tag::Kind::Len:
            return "L:v" + std::to_string(t.var);
        case Tag::Kind::Pos:
            return "P" + std::to_string(t.level) + ":v" + std::to_string(t.var);
        case Tag::Kind::Mis:
            return "M" + std::to_string(t.level) + ":v" + std::to_string(t.var) + ":d" +
                   std::to_string(t.cid) + ":" + side_letter(t.side) + ":" + sigma.glyph(t.sym);
        case Tag::Kind::Cop:
            return "C" + std::to_string(t.level) + ":v" + std::to_string(t.var) + ":d" +
                   std::to_string(t.cid) + ":" + side_letter(t.side);
    }
    return "?";
}

}  // namespace posc
