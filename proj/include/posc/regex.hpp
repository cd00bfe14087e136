#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "posc/nfa.hpp"

namespace posc {

struct RegexError : std::runtime_error {
    size_t position;
    RegexError(const std::string& what, size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

namespace detail {

// Thompson fragments over an NFA with explicit epsilon edges (sym == -1).
struct EpsNfa {
    static constexpr SymbolCode kEps = -1;
    int32_t num_states = 0;
    std::vector<Nfa::Trans> transitions;

    State fresh() { return num_states++; }
    void edge(State s, SymbolCode a, State d) { transitions.push_back({s, a, d}); }
};

struct Frag {
    State in;
    State out;
};

class RegexParser {
public:
    RegexParser(const std::string& pattern, const Alphabet& sigma)
        : text_(pattern), sigma_(sigma) {}

    // expr := term (('+'|'|') expr)?
    Frag parse(EpsNfa& g) {
        Frag f = expr(g);
        skip_ws();
        if (pos_ != text_.size()) throw RegexError("unexpected character", pos_);
        return f;
    }

private:
    Frag expr(EpsNfa& g) {
        Frag lhs = term(g);
        skip_ws();
        if (peek() == '+' || peek() == '|') {
            ++pos_;
            Frag rhs = expr(g);
            Frag f{g.fresh(), g.fresh()};
            g.edge(f.in, EpsNfa::kEps, lhs.in);
            g.edge(f.in, EpsNfa::kEps, rhs.in);
            g.edge(lhs.out, EpsNfa::kEps, f.out);
            g.edge(rhs.out, EpsNfa::kEps, f.out);
            return f;
        }
        return lhs;
    }

    Frag term(EpsNfa& g) {
        Frag lhs = factor(g);
        skip_ws();
        while (starts_factor()) {
            Frag rhs = factor(g);
            g.edge(lhs.out, EpsNfa::kEps, rhs.in);
            lhs.out = rhs.out;
            skip_ws();
        }
        return lhs;
    }

    Frag factor(EpsNfa& g) {
        Frag a = atom(g);
        skip_ws();
        if (peek() == '*') {
            ++pos_;
            Frag f{g.fresh(), g.fresh()};
            g.edge(f.in, EpsNfa::kEps, a.in);
            g.edge(f.in, EpsNfa::kEps, f.out);
            g.edge(a.out, EpsNfa::kEps, a.in);
            g.edge(a.out, EpsNfa::kEps, f.out);
            return f;
        }
        if (peek() == '?') {
            ++pos_;
            Frag f{g.fresh(), g.fresh()};
            g.edge(f.in, EpsNfa::kEps, a.in);
            g.edge(f.in, EpsNfa::kEps, f.out);
            g.edge(a.out, EpsNfa::kEps, f.out);
            return f;
        }
        return a;
    }

    Frag atom(EpsNfa& g) {
        skip_ws();
        char c = peek();
        if (c == '(') {
            size_t open = pos_++;
            Frag inner = expr(g);
            skip_ws();
            if (peek() != ')') throw RegexError("unbalanced '('", open);
            ++pos_;
            return inner;
        }
        if (c == '\\') {
            ++pos_;
            char esc = peek();
            if (esc != '(' && esc != ')' && esc != '+' && esc != '*' && esc != '?' && esc != '\\')
                throw RegexError("bad escape", pos_);
            ++pos_;
            return literal(g, esc);
        }
        if (c == '\0' || c == ')' || c == '*' || c == '?' || c == '+' || c == '|')
            throw RegexError("expected literal or '('", pos_);
        ++pos_;
        return literal(g, c);
    }

    Frag literal(EpsNfa& g, char glyph) {
        if (!sigma_.contains(glyph))
            throw RegexError(std::string("literal '") + glyph + "' outside alphabet", pos_ - 1);
        Frag f{g.fresh(), g.fresh()};
        g.edge(f.in, sigma_.code(glyph), f.out);
        return f;
    }

    bool starts_factor() {
        char c = peek();
        return c != '\0' && c != ')' && c != '*' && c != '?' && c != '+' && c != '|';
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    std::string text_;
    const Alphabet& sigma_;
    size_t pos_ = 0;
};

inline std::set<State> eps_closure(const EpsNfa& g, State q) {
    std::set<State> closure{q};
    std::vector<State> stack{q};
    while (!stack.empty()) {
        State cur = stack.back();
        stack.pop_back();
        for (const auto& t : g.transitions)
            if (t.src == cur && t.sym == EpsNfa::kEps && closure.insert(t.dst).second)
                stack.push_back(t.dst);
    }
    return closure;
}

}  // namespace detail

/// Compiles the small regex dialect (literals, concatenation, '+'/'|' union,
/// '*', '?', grouping, escapes) into an NFA without epsilon transitions.
/// The empty pattern denotes the language containing only the empty word.
inline Nfa compile_regex(const std::string& pattern, const Alphabet& sigma) {
    detail::EpsNfa g;
    detail::Frag frag;
    {
        // an all-whitespace pattern also means epsilon
        bool blank = true;
        for (char c : pattern)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) {
            frag.in = g.fresh();
            frag.out = g.fresh();
            g.edge(frag.in, detail::EpsNfa::kEps, frag.out);
        } else {
            detail::RegexParser parser(pattern, sigma);
            frag = parser.parse(g);
        }
    }

    // epsilon elimination: q -a-> r becomes q' -a-> r for every q' with
    // q in closure(q'); acceptance via closure reaching frag.out
    Nfa out;
    out.num_states = g.num_states;
    std::vector<std::set<State>> closure(g.num_states);
    for (State q = 0; q < g.num_states; ++q) closure[q] = detail::eps_closure(g, q);

    for (State q = 0; q < g.num_states; ++q)
        for (State mid : closure[q])
            for (const auto& t : g.transitions)
                if (t.src == mid && t.sym != detail::EpsNfa::kEps)
                    out.add_transition(q, t.sym, t.dst);

    out.mark_initial(frag.in);
    for (State q = 0; q < g.num_states; ++q)
        if (closure[q].count(frag.out)) out.mark_final(q);

    return trim(out);
}

}  // namespace posc
