#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "posc/alphabet.hpp"

namespace posc {

using State = int32_t;

/// A classical NFA over symbol codes. No epsilon transitions; states are
/// dense integer ids 0..num_states-1.
struct Nfa {
    struct Trans {
        State src;
        SymbolCode sym;
        State dst;

        auto operator<=>(const Trans&) const = default;
    };

    int32_t num_states = 0;
    std::vector<Trans> transitions;
    std::set<State> initial;
    std::set<State> final;

    State add_state() { return num_states++; }

    void add_transition(State src, SymbolCode sym, State dst) {
        check_state(src);
        check_state(dst);
        Trans t{src, sym, dst};
        auto it = std::lower_bound(transitions.begin(), transitions.end(), t);
        if (it == transitions.end() || *it != t) transitions.insert(it, t);
    }

    void mark_initial(State q) {
        check_state(q);
        initial.insert(q);
    }
    void mark_final(State q) {
        check_state(q);
        final.insert(q);
    }

    bool is_initial(State q) const { return initial.count(q) != 0; }
    bool is_final(State q) const { return final.count(q) != 0; }

private:
    void check_state(State q) const {
        if (q < 0 || q >= num_states) throw std::out_of_range("undeclared NFA state");
    }
};

/// Subset simulation: true iff w is accepted by a.
inline bool accepts(const Nfa& a, const Word& w) {
    std::set<State> current = a.initial;
    for (SymbolCode sym : w) {
        std::set<State> next;
        for (const auto& t : a.transitions)
            if (t.sym == sym && current.count(t.src)) next.insert(t.dst);
        current.swap(next);
        if (current.empty()) return false;
    }
    for (State q : current)
        if (a.is_final(q)) return true;
    return false;
}

/// Restricts a to states reachable from initial and co-reachable from final,
/// renumbering states densely. Language is preserved.
inline Nfa trim(const Nfa& a) {
    std::vector<char> fwd(a.num_states, 0), bwd(a.num_states, 0);
    std::vector<State> stack;
    for (State q : a.initial) {
        fwd[q] = 1;
        stack.push_back(q);
    }
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (const auto& t : a.transitions)
            if (t.src == q && !fwd[t.dst]) {
                fwd[t.dst] = 1;
                stack.push_back(t.dst);
            }
    }
    for (State q : a.final)
        if (!bwd[q]) {
            bwd[q] = 1;
            stack.push_back(q);
        }
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (const auto& t : a.transitions)
            if (t.dst == q && !bwd[t.src]) {
                bwd[t.src] = 1;
                stack.push_back(t.src);
            }
    }

    std::vector<State> renum(a.num_states, -1);
    Nfa out;
    for (State q = 0; q < a.num_states; ++q)
        if (fwd[q] && bwd[q]) renum[q] = out.add_state();
    for (const auto& t : a.transitions)
        if (renum[t.src] >= 0 && renum[t.dst] >= 0)
            out.add_transition(renum[t.src], t.sym, renum[t.dst]);
    for (State q : a.initial)
        if (renum[q] >= 0) out.mark_initial(renum[q]);
    for (State q : a.final)
        if (renum[q] >= 0) out.mark_final(renum[q]);
    if (out.num_states == 0) out.add_state();  // keep at least one (useless) state
    return out;
}

/// Product construction restricted to the reachable part.
inline Nfa intersect(const Nfa& a, const Nfa& b) {
    Nfa out;
    std::map<std::pair<State, State>, State> index;
    std::vector<std::pair<State, State>> queue;

    auto get = [&](State qa, State qb) {
        auto key = std::make_pair(qa, qb);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        State fresh = out.add_state();
        index.emplace(key, fresh);
        queue.push_back(key);
        if (a.is_final(qa) && b.is_final(qb)) out.mark_final(fresh);
        return fresh;
    };

    for (State qa : a.initial)
        for (State qb : b.initial) out.mark_initial(get(qa, qb));

    for (size_t i = 0; i < queue.size(); ++i) {
        auto [qa, qb] = queue[i];
        State src = index.at({qa, qb});
        for (const auto& ta : a.transitions) {
            if (ta.src != qa) continue;
            for (const auto& tb : b.transitions) {
                if (tb.src != qb || tb.sym != ta.sym) continue;
                out.add_transition(src, ta.sym, get(ta.dst, tb.dst));
            }
        }
    }
    if (out.num_states == 0) out.add_state();
    return out;
}

/// Flips all transitions and swaps initial/final. L(result) = reverse of L(a).
inline Nfa reverse(const Nfa& a) {
    Nfa out;
    out.num_states = a.num_states;
    for (const auto& t : a.transitions) out.transitions.push_back({t.dst, t.sym, t.src});
    std::sort(out.transitions.begin(), out.transitions.end());
    out.transitions.erase(std::unique(out.transitions.begin(), out.transitions.end()),
                          out.transitions.end());
    out.initial = a.final;
    out.final = a.initial;
    return out;
}

/// True iff the automaton has no cycles (so its language is finite).
inline bool is_acyclic(const Nfa& a) {
    // colors: 0 unseen, 1 on stack, 2 done
    std::vector<int> color(a.num_states, 0);
    std::vector<std::vector<State>> succ(a.num_states);
    for (const auto& t : a.transitions) succ[t.src].push_back(t.dst);

    for (State root = 0; root < a.num_states; ++root) {
        if (color[root]) continue;
        std::vector<std::pair<State, size_t>> stack{{root, 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto& [q, i] = stack.back();
            if (i < succ[q].size()) {
                State nxt = succ[q][i++];
                if (color[nxt] == 1) return false;
                if (color[nxt] == 0) {
                    color[nxt] = 1;
                    stack.push_back({nxt, 0});
                }
            } else {
                color[q] = 2;
                stack.pop_back();
            }
        }
    }
    return true;
}

/// Length of the longest path in an acyclic automaton (0 if none).
inline int longest_path(const Nfa& a) {
    if (!is_acyclic(a)) throw std::logic_error("longest_path on cyclic automaton");
    std::vector<int> depth(a.num_states, 0);
    // relax in topological fashion; |Q| rounds suffice on a DAG
    for (State round = 0; round < a.num_states; ++round) {
        bool changed = false;
        for (const auto& t : a.transitions)
            if (depth[t.src] + 1 > depth[t.dst]) {
                depth[t.dst] = depth[t.src] + 1;
                changed = true;
            }
        if (!changed) break;
    }
    int best = 0;
    for (State q = 0; q < a.num_states; ++q) best = std::max(best, depth[q]);
    return best;
}

/// Structural flatness: every nontrivial SCC of the transition graph is a
/// single simple cycle, i.e. each state of such an SCC has exactly one
/// incoming and one outgoing transition staying inside the SCC.
inline bool is_flat(const Nfa& a) {
    int n = a.num_states;
    // Tarjan SCC, iterative
    std::vector<std::vector<State>> succ(n);
    for (const auto& t : a.transitions) succ[t.src].push_back(t.dst);

    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<State> scc_stack;
    int next_index = 0, comp_count = 0;

    struct Frame {
        State q;
        size_t child;
    };
    for (State root = 0; root < n; ++root) {
        if (idx[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        idx[root] = low[root] = next_index++;
        scc_stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            auto& fr = frames.back();
            if (fr.child < succ[fr.q].size()) {
                State nxt = succ[fr.q][fr.child++];
                if (idx[nxt] == -1) {
                    idx[nxt] = low[nxt] = next_index++;
                    scc_stack.push_back(nxt);
                    on_stack[nxt] = 1;
                    frames.push_back({nxt, 0});
                } else if (on_stack[nxt]) {
                    low[fr.q] = std::min(low[fr.q], idx[nxt]);
                }
            } else {
                if (low[fr.q] == idx[fr.q]) {
                    State w;
                    do {
                        w = scc_stack.back();
                        scc_stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = comp_count;
                    } while (w != fr.q);
                    ++comp_count;
                }
                State done = fr.q;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().q] = std::min(low[frames.back().q], low[done]);
            }
        }
    }

    std::vector<int> in_deg(n, 0), out_deg(n, 0), internal(comp_count, 0);
    for (const auto& t : a.transitions) {
        if (comp[t.src] == comp[t.dst]) {
            ++out_deg[t.src];
            ++in_deg[t.dst];
            ++internal[comp[t.src]];
        }
    }
    for (State q = 0; q < n; ++q) {
        if (internal[comp[q]] == 0) continue;  // trivial SCC
        if (in_deg[q] != 1 || out_deg[q] != 1) return false;
    }
    return true;
}

}  // namespace posc
