#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace posc::lia {

using Int = long long;
using Var = int32_t;

/// Count variables are boxed to [0, count_bound] by the solver; free
/// integers to [-int_bound, int_bound].
enum class VarKind : uint8_t { Count, Free };

class VarPool {
public:
    Var intern(const std::string& name, VarKind kind = VarKind::Free) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        Var v = static_cast<Var>(names_.size());
        names_.push_back(name);
        kinds_.push_back(kind);
        index_.emplace(name, v);
        return v;
    }

    Var lookup(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw std::out_of_range("unknown variable: " + name);
        return it->second;
    }

    const std::string& name(Var v) const { return names_.at(static_cast<size_t>(v)); }
    VarKind kind(Var v) const { return kinds_.at(static_cast<size_t>(v)); }
    size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::vector<VarKind> kinds_;
    std::unordered_map<std::string, Var> index_;
};

/// Linear integer term: sum of coeff * var plus a constant. Construction
/// keeps the term list sorted by variable with nonzero coefficients.
struct Lin {
    std::vector<std::pair<Var, Int>> terms;
    Int constant = 0;

    Lin() = default;
    /*implicit*/ Lin(Int k) : constant(k) {}
    static Lin var(Var v, Int coeff = 1) {
        Lin l;
        if (coeff != 0) l.terms.push_back({v, coeff});
        return l;
    }

    Lin& operator+=(const Lin& o) {
        std::vector<std::pair<Var, Int>> merged;
        merged.reserve(terms.size() + o.terms.size());
        size_t i = 0, j = 0;
        while (i < terms.size() || j < o.terms.size()) {
            if (j == o.terms.size() || (i < terms.size() && terms[i].first < o.terms[j].first))
                merged.push_back(terms[i++]);
            else if (i == terms.size() || o.terms[j].first < terms[i].first)
                merged.push_back(o.terms[j++]);
            else {
                Int c = terms[i].second + o.terms[j].second;
                if (c != 0) merged.push_back({terms[i].first, c});
                ++i;
                ++j;
            }
        }
        terms = std::move(merged);
        constant += o.constant;
        return *this;
    }

    Lin operator+(const Lin& o) const {
        Lin r = *this;
        r += o;
        return r;
    }
    Lin operator-() const {
        Lin r = *this;
        for (auto& [v, c] : r.terms) c = -c;
        r.constant = -r.constant;
        return r;
    }
    Lin operator-(const Lin& o) const { return *this + (-o); }
    Lin operator*(Int k) const {
        Lin r;
        if (k == 0) return r;
        r = *this;
        for (auto& [v, c] : r.terms) c *= k;
        r.constant *= k;
        return r;
    }

    bool operator==(const Lin&) const = default;
};

enum class Rel : uint8_t { Le, Lt, Ge, Gt, Eq, Ne };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Connectivity block of a Parikh formula: per-state span/init variables
/// plus the transition graph. Semantically equal to the conjunction of the
/// per-state span formulas (see expand_span); the solver may treat the
/// block lazily.
struct SpanBlock {
    struct StateVars {
        Var span_v;
        Var init_v;
    };
    struct Edge {
        Var count_v;
        int32_t src;
        int32_t dst;
    };
    std::vector<StateVars> states;
    std::vector<Edge> edges;
};

struct Formula {
    NodePtr node;

    Formula() = default;
    explicit Formula(NodePtr n) : node(std::move(n)) {}
    bool valid() const { return node != nullptr; }
};

struct Node {
    enum class Kind : uint8_t { True, False, Atom, And, Or, Not, Implies, Span, Forall, Exists };

    Kind kind;
    // Atom
    Lin lhs;
    Rel rel = Rel::Le;
    Lin rhs;
    // And/Or
    std::vector<Formula> children;
    // Not/Implies (children[0] -> children[1]); quantifier body = children[0]
    std::vector<Var> bound;  // Forall/Exists
    std::shared_ptr<const SpanBlock> span;
};

inline Formula make_node(Node n) { return Formula(std::make_shared<Node>(std::move(n))); }

inline Formula f_true() {
    static Formula t = make_node({Node::Kind::True});
    return t;
}
inline Formula f_false() {
    static Formula f = make_node({Node::Kind::False});
    return f;
}

inline Formula atom(Lin lhs, Rel rel, Lin rhs) {
    Node n{Node::Kind::Atom};
    n.lhs = std::move(lhs);
    n.rel = rel;
    n.rhs = std::move(rhs);
    return make_node(std::move(n));
}

inline Formula le(Lin a, Lin b) { return atom(std::move(a), Rel::Le, std::move(b)); }
inline Formula lt(Lin a, Lin b) { return atom(std::move(a), Rel::Lt, std::move(b)); }
inline Formula ge(Lin a, Lin b) { return atom(std::move(a), Rel::Ge, std::move(b)); }
inline Formula gt(Lin a, Lin b) { return atom(std::move(a), Rel::Gt, std::move(b)); }
inline Formula eq(Lin a, Lin b) { return atom(std::move(a), Rel::Eq, std::move(b)); }
inline Formula ne(Lin a, Lin b) { return atom(std::move(a), Rel::Ne, std::move(b)); }

inline Formula f_and(std::vector<Formula> children) {
    std::vector<Formula> kept;
    for (auto& c : children) {
        if (!c.valid() || c.node->kind == Node::Kind::True) continue;
        if (c.node->kind == Node::Kind::False) return f_false();
        kept.push_back(std::move(c));
    }
    if (kept.empty()) return f_true();
    if (kept.size() == 1) return kept.front();
    Node n{Node::Kind::And};
    n.children = std::move(kept);
    return make_node(std::move(n));
}

inline Formula f_or(std::vector<Formula> children) {
    std::vector<Formula> kept;
    for (auto& c : children) {
        if (!c.valid() || c.node->kind == Node::Kind::False) continue;
        if (c.node->kind == Node::Kind::True) return f_true();
        kept.push_back(std::move(c));
    }
    if (kept.empty()) return f_false();
    if (kept.size() == 1) return kept.front();
    Node n{Node::Kind::Or};
    n.children = std::move(kept);
    return make_node(std::move(n));
}

inline Formula f_not(Formula f) {
    if (f.node->kind == Node::Kind::True) return f_false();
    if (f.node->kind == Node::Kind::False) return f_true();
    Node n{Node::Kind::Not};
    n.children = {std::move(f)};
    return make_node(std::move(n));
}

inline Formula implies(Formula a, Formula b) {
    Node n{Node::Kind::Implies};
    n.children = {std::move(a), std::move(b)};
    return make_node(std::move(n));
}

inline Formula iff(Formula a, Formula b) {
    return f_and({implies(a, b), implies(b, a)});
}

inline Formula span_block(std::shared_ptr<const SpanBlock> block) {
    Node n{Node::Kind::Span};
    n.span = std::move(block);
    return make_node(std::move(n));
}

inline Formula forall(std::vector<Var> vars, Formula body) {
    Node n{Node::Kind::Forall};
    n.bound = std::move(vars);
    n.children = {std::move(body)};
    return make_node(std::move(n));
}

inline Formula exists(std::vector<Var> vars, Formula body) {
    Node n{Node::Kind::Exists};
    n.bound = std::move(vars);
    n.children = {std::move(body)};
    return make_node(std::move(n));
}

/// The span block written out: for every state q,
///   (span_q >= -1) and (span_q = 0 <-> init_q = 1) and
///   (span_q = -1 -> init_q = 0 and all incoming counts 0) and
///   (span_q > 0 -> some incoming edge t with #t >= 1, span_src >= 0,
///                  span_q = span_src + 1).
/// Unused states are pinned to exactly -1.
inline Formula expand_span(const SpanBlock& b) {
    std::vector<std::vector<const SpanBlock::Edge*>> in_edges(b.states.size());
    for (const auto& e : b.edges) in_edges[static_cast<size_t>(e.dst)].push_back(&e);

    std::vector<Formula> conj;
    for (size_t q = 0; q < b.states.size(); ++q) {
        Lin span = Lin::var(b.states[q].span_v);
        Lin init = Lin::var(b.states[q].init_v);
        conj.push_back(ge(span, Lin(-1)));
        conj.push_back(iff(eq(span, Lin(0)), eq(init, Lin(1))));

        std::vector<Formula> unused{eq(init, Lin(0))};
        for (const auto* e : in_edges[q]) unused.push_back(eq(Lin::var(e->count_v), Lin(0)));
        conj.push_back(implies(eq(span, Lin(-1)), f_and(std::move(unused))));

        std::vector<Formula> parents;
        for (const auto* e : in_edges[q]) {
            Lin src_span = Lin::var(b.states[static_cast<size_t>(e->src)].span_v);
            parents.push_back(f_and({ge(Lin::var(e->count_v), Lin(1)), ge(src_span, Lin(0)),
                                     eq(span, src_span + Lin(1))}));
        }
        conj.push_back(implies(gt(span, Lin(0)), f_or(std::move(parents))));
    }
    return f_and(std::move(conj));
}

using Model = std::map<Var, Int>;

inline Int eval_lin(const Lin& l, const Model& m) {
    __int128 acc = l.constant;
    for (const auto& [v, c] : l.terms) {
        auto it = m.find(v);
        if (it == m.end()) throw std::out_of_range("model misses a variable");
        acc += static_cast<__int128>(c) * it->second;
    }
    if (acc > INT64_MAX / 2 || acc < INT64_MIN / 2) throw std::overflow_error("term overflow");
    return static_cast<Int>(acc);
}

/// Direct evaluation; quantifier-free formulas only.
inline bool eval(const Formula& f, const Model& m) {
    const Node& n = *f.node;
    switch (n.kind) {
        case Node::Kind::True:
            return true;
        case Node::Kind::False:
            return false;
        case Node::Kind::Atom: {
            Int a = eval_lin(n.lhs, m), b = eval_lin(n.rhs, m);
            switch (n.rel) {
                case Rel::Le: return a <= b;
                case Rel::Lt: return a < b;
                case Rel::Ge: return a >= b;
                case Rel::Gt: return a > b;
                case Rel::Eq: return a == b;
                case Rel::Ne: return a != b;
            }
            return false;
        }
        case Node::Kind::And:
            for (const auto& c : n.children)
                if (!eval(c, m)) return false;
            return true;
        case Node::Kind::Or:
            for (const auto& c : n.children)
                if (eval(c, m)) return true;
            return false;
        case Node::Kind::Not:
            return !eval(n.children[0], m);
        case Node::Kind::Implies:
            return !eval(n.children[0], m) || eval(n.children[1], m);
        case Node::Kind::Span:
            return eval(expand_span(*n.span), m);
        case Node::Kind::Forall:
        case Node::Kind::Exists:
            throw std::logic_error("eval on quantified formula");
    }
    return false;
}

/// Substitutes integer constants for variables (used to freeze an outer
/// model before solving the inner part of a forall-exists formula).
inline Formula substitute(const Formula& f, const Model& values) {
    const Node& n = *f.node;
    auto subst_lin = [&](const Lin& l) {
        Lin out;
        out.constant = l.constant;
        for (const auto& [v, c] : l.terms) {
            auto it = values.find(v);
            if (it != values.end())
                out.constant += c * it->second;
            else
                out += Lin::var(v, c);
        }
        return out;
    };
    switch (n.kind) {
        case Node::Kind::True:
        case Node::Kind::False:
            return f;
        case Node::Kind::Atom:
            return atom(subst_lin(n.lhs), n.rel, subst_lin(n.rhs));
        case Node::Kind::And:
        case Node::Kind::Or: {
            std::vector<Formula> kids;
            kids.reserve(n.children.size());
            for (const auto& c : n.children) kids.push_back(substitute(c, values));
            return n.kind == Node::Kind::And ? f_and(std::move(kids)) : f_or(std::move(kids));
        }
        case Node::Kind::Not:
            return f_not(substitute(n.children[0], values));
        case Node::Kind::Implies:
            return implies(substitute(n.children[0], values), substitute(n.children[1], values));
        case Node::Kind::Span:
            for (const auto& st : n.span->states)
                if (values.count(st.span_v) || values.count(st.init_v))
                    return substitute(expand_span(*n.span), values);
            for (const auto& e : n.span->edges)
                if (values.count(e.count_v)) return substitute(expand_span(*n.span), values);
            return f;
        case Node::Kind::Forall:
        case Node::Kind::Exists: {
            for (Var v : n.bound)
                if (values.count(v)) throw std::logic_error("substituting a bound variable");
            Node out{n.kind};
            out.bound = n.bound;
            out.children = {substitute(n.children[0], values)};
            return make_node(std::move(out));
        }
    }
    return f;
}

inline void collect_vars(const Formula& f, std::vector<bool>& seen, std::vector<bool>& bound_seen) {
    const Node& n = *f.node;
    auto mark = [&](Var v) {
        if (static_cast<size_t>(v) >= seen.size()) seen.resize(static_cast<size_t>(v) + 1, false);
        seen[static_cast<size_t>(v)] = true;
    };
    switch (n.kind) {
        case Node::Kind::Atom:
            for (const auto& [v, c] : n.lhs.terms) mark(v);
            for (const auto& [v, c] : n.rhs.terms) mark(v);
            break;
        case Node::Kind::Span:
            for (const auto& st : n.span->states) {
                mark(st.span_v);
                mark(st.init_v);
            }
            for (const auto& e : n.span->edges) mark(e.count_v);
            break;
        case Node::Kind::Forall:
        case Node::Kind::Exists:
            for (Var v : n.bound) {
                if (static_cast<size_t>(v) >= bound_seen.size())
                    bound_seen.resize(static_cast<size_t>(v) + 1, false);
                bound_seen[static_cast<size_t>(v)] = true;
            }
            [[fallthrough]];
        default:
            for (const auto& c : n.children) collect_vars(c, seen, bound_seen);
            break;
    }
}

inline bool has_quantifier(const Formula& f) {
    const Node& n = *f.node;
    if (n.kind == Node::Kind::Forall || n.kind == Node::Kind::Exists) return true;
    for (const auto& c : n.children)
        if (has_quantifier(c)) return true;
    return false;
}

namespace detail {

inline std::string smt_symbol(const std::string& name) {
    auto simple = [&] {
        if (name.empty()) return false;
        auto ok_head = [](char c) {
            return std::isalpha(static_cast<unsigned char>(c)) || std::strchr("~!@$%^&*_+=<>.?/-", c);
        };
        auto ok_tail = [&](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || std::strchr("~!@$%^&*_+=<>.?/-", c);
        };
        if (!ok_head(name[0])) return false;
        for (char c : name.substr(1))
            if (!ok_tail(c)) return false;
        return true;
    }();
    if (simple) return name;
    return "|" + name + "|";
}

inline std::string smt_int(Int k) {
    if (k < 0) return "(- " + std::to_string(-k) + ")";
    return std::to_string(k);
}

inline std::string smt_lin(const Lin& l, const VarPool& pool) {
    std::vector<std::string> parts;
    for (const auto& [v, c] : l.terms) {
        std::string x = smt_symbol(pool.name(v));
        parts.push_back(c == 1 ? x : "(* " + smt_int(c) + " " + x + ")");
    }
    if (l.constant != 0 || parts.empty()) parts.push_back(smt_int(l.constant));
    if (parts.size() == 1) return parts.front();
    std::string out = "(+";
    for (const auto& p : parts) out += " " + p;
    return out + ")";
}

inline std::string smt_formula(const Formula& f, const VarPool& pool) {
    const Node& n = *f.node;
    switch (n.kind) {
        case Node::Kind::True:
            return "true";
        case Node::Kind::False:
            return "false";
        case Node::Kind::Atom: {
            const char* op = nullptr;
            switch (n.rel) {
                case Rel::Le: op = "<="; break;
                case Rel::Lt: op = "<"; break;
                case Rel::Ge: op = ">="; break;
                case Rel::Gt: op = ">"; break;
                case Rel::Eq: op = "="; break;
                case Rel::Ne: op = "distinct"; break;
            }
            return std::string("(") + op + " " + smt_lin(n.lhs, pool) + " " +
                   smt_lin(n.rhs, pool) + ")";
        }
        case Node::Kind::And:
        case Node::Kind::Or: {
            std::string out = n.kind == Node::Kind::And ? "(and" : "(or";
            for (const auto& c : n.children) out += " " + smt_formula(c, pool);
            return out + ")";
        }
        case Node::Kind::Not:
            return "(not " + smt_formula(n.children[0], pool) + ")";
        case Node::Kind::Implies:
            return "(=> " + smt_formula(n.children[0], pool) + " " +
                   smt_formula(n.children[1], pool) + ")";
        case Node::Kind::Span:
            return smt_formula(expand_span(*n.span), pool);
        case Node::Kind::Forall:
        case Node::Kind::Exists: {
            std::string out = n.kind == Node::Kind::Forall ? "(forall (" : "(exists (";
            for (size_t i = 0; i < n.bound.size(); ++i) {
                if (i) out += " ";
                out += "(" + smt_symbol(pool.name(n.bound[i])) + " Int)";
            }
            return out + ") " + smt_formula(n.children[0], pool) + ")";
        }
    }
    return "true";
}

}  // namespace detail

/// Emits a complete SMT-LIB2 script. Quantified formulas require the LIA
/// logic; variable declarations follow pool order for reproducible output.
inline std::string emit_smtlib(const Formula& f, const std::string& logic, const VarPool& pool) {
    if (logic != "QF_LIA" && logic != "LIA") throw std::invalid_argument("unsupported logic");
    if (logic == "QF_LIA" && has_quantifier(f))
        throw std::invalid_argument("quantified formula requires logic LIA");

    std::vector<bool> seen, bound;
    collect_vars(f, seen, bound);

    std::ostringstream os;
    os << "(set-logic " << logic << ")\n";
    for (size_t v = 0; v < seen.size(); ++v) {
        bool is_bound = v < bound.size() && bound[v];
        if (seen[v] && !is_bound)
            os << "(declare-const " << detail::smt_symbol(pool.name(static_cast<Var>(v)))
               << " Int)\n";
    }
    os << "(assert " << detail::smt_formula(f, pool) << ")\n";
    os << "(check-sat)\n";
    return os.str();
}

}  // namespace posc::lia
