#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "posc/nfa.hpp"
#include "posc/tags.hpp"

namespace posc {

/// An NFA whose transitions carry sets of tags. Tags are counted by the
/// Parikh machinery, never read. States of derived automata are
/// (base state, copy) pairs laid out as copy-major dense ids.
struct TagAutomaton {
    struct Trans {
        State src;
        std::vector<Tag> tags;  // sorted, duplicate-free
        State dst;
        int32_t origin;  // id of the underlying base transition, -1 if none

        bool has(const Tag& t) const {
            return std::binary_search(tags.begin(), tags.end(), t);
        }
        bool reads_symbol() const {
            for (const auto& t : tags)
                if (t.kind == Tag::Kind::Sym) return true;
            return false;
        }
    };

    int32_t num_states = 0;
    int32_t base_states = 0;  // states per copy
    int32_t copies = 1;
    std::vector<Trans> transitions;
    std::set<State> initial;
    std::set<State> final;

    State state_id(State base, int copy) const { return (copy - 1) * base_states + base; }
    State base_of(State q) const { return q % base_states; }
    int copy_of(State q) const { return q / base_states + 1; }

    void add_transition(State src, std::vector<Tag> tags, State dst, int32_t origin) {
        std::sort(tags.begin(), tags.end());
        tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
        transitions.push_back({src, std::move(tags), dst, origin});
    }

    /// Sorted list of distinct tags appearing on transitions.
    std::vector<Tag> tag_universe() const {
        std::set<Tag> seen;
        for (const auto& t : transitions) seen.insert(t.tags.begin(), t.tags.end());
        return {seen.begin(), seen.end()};
    }
};

/// Keeps only states on some initial-to-final path; renumbers densely.
/// Accepting runs (and their tag multisets) are preserved.
inline TagAutomaton trim(const TagAutomaton& ta) {
    std::vector<char> fwd(ta.num_states, 0), bwd(ta.num_states, 0);
    std::vector<State> stack;
    for (State q : ta.initial) {
        fwd[q] = 1;
        stack.push_back(q);
    }
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (const auto& t : ta.transitions)
            if (t.src == q && !fwd[t.dst]) {
                fwd[t.dst] = 1;
                stack.push_back(t.dst);
            }
    }
    for (State q : ta.final)
        if (fwd[q] && !bwd[q]) {
            bwd[q] = 1;
            stack.push_back(q);
        }
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (const auto& t : ta.transitions)
            if (t.dst == q && fwd[t.src] && !bwd[t.src]) {
                bwd[t.src] = 1;
                stack.push_back(t.src);
            }
    }

    TagAutomaton out;
    out.copies = ta.copies;
    std::vector<State> renum(ta.num_states, -1);
    for (State q = 0; q < ta.num_states; ++q)
        if (fwd[q] && bwd[q]) renum[q] = out.num_states++;
    out.base_states = out.num_states;  // copy structure is not preserved by trimming
    for (const auto& t : ta.transitions)
        if (renum[t.src] >= 0 && renum[t.dst] >= 0)
            out.transitions.push_back({renum[t.src], t.tags, renum[t.dst], t.origin});
    for (State q : ta.initial)
        if (renum[q] >= 0) out.initial.insert(renum[q]);
    for (State q : ta.final)
        if (renum[q] >= 0) out.final.insert(renum[q]);
    if (out.num_states == 0) {
        out.num_states = 1;
        out.base_states = 1;
    }
    return out;
}

/// Lifts an NFA into a tag automaton whose transitions carry
/// {Sym(a), Len(x)}, one tag pair per read letter of variable x.
inline TagAutomaton lentag(const Nfa& a, VarId x) {
    TagAutomaton ta;
    ta.num_states = a.num_states;
    ta.base_states = a.num_states;
    ta.copies = 1;
    ta.initial = a.initial;
    ta.final = a.final;
    int32_t id = 0;
    for (const auto& t : a.transitions)
        ta.add_transition(t.src, {Tag::symbol(t.sym), Tag::len(x)}, t.dst, id++);
    return ta;
}

/// The epsilon-concatenation of per-variable lentag automata in a fixed
/// variable order. Connector transitions carry no tags and link final
/// states of one block to initial states of the next.
struct ConcatSkeleton {
    struct Block {
        VarId var;
        State first_state;       // offset of the block's states
        int32_t num_states;
        std::set<State> initials;  // in skeleton coordinates
        std::set<State> finals;
        int32_t trans_begin;     // reading transitions [begin, end)
        int32_t trans_end;
    };

    TagAutomaton ta;                 // A-circle: Sym/Len tags plus connectors
    std::vector<Block> blocks;       // in variable order
    std::vector<VarId> order;        // the fixed order of variables
    std::vector<VarId> var_of_state; // block variable per skeleton state

    const Block& block_of(VarId x) const {
        for (const auto& b : blocks)
            if (b.var == x) return b;
        throw std::out_of_range("variable has no block");
    }
};

inline ConcatSkeleton build_skeleton(const std::vector<VarId>& vars,
                                     const std::map<VarId, Nfa>& automata) {
    if (vars.empty()) throw std::invalid_argument("empty variable list");

    ConcatSkeleton sk;
    sk.order = vars;
    int32_t offset = 0;

    // blocks first so connectors can point forward
    for (VarId x : vars) {
        auto it = automata.find(x);
        if (it == automata.end()) throw std::out_of_range("no automaton for variable");
        const Nfa& a = it->second;

        ConcatSkeleton::Block blk;
        blk.var = x;
        blk.first_state = offset;
        blk.num_states = a.num_states;
        blk.trans_begin = static_cast<int32_t>(sk.ta.transitions.size());
        for (const auto& t : a.transitions)
            sk.ta.add_transition(offset + t.src, {Tag::symbol(t.sym), Tag::len(x)},
                                 offset + t.dst,
                                 static_cast<int32_t>(sk.ta.transitions.size()));
        blk.trans_end = static_cast<int32_t>(sk.ta.transitions.size());
        for (State q : a.initial) blk.initials.insert(offset + q);
        for (State q : a.final) blk.finals.insert(offset + q);
        for (int32_t i = 0; i < a.num_states; ++i) sk.var_of_state.push_back(x);
        offset += a.num_states;
        sk.blocks.push_back(std::move(blk));
    }
    sk.ta.num_states = offset;
    sk.ta.base_states = offset;

    for (size_t b = 0; b + 1 < sk.blocks.size(); ++b)
        for (State f : sk.blocks[b].finals)
            for (State i : sk.blocks[b + 1].initials)
                sk.ta.add_transition(f, {}, i, static_cast<int32_t>(sk.ta.transitions.size()));

    sk.ta.initial = sk.blocks.front().initials;
    sk.ta.final = sk.blocks.back().finals;
    return sk;
}

/// Three copies of the skeleton with one sampling jump per mismatch level:
/// copy 1 runs before the first sample, copy 2 between the samples, copy 3
/// after the second. Sampling transitions carry Mis tags with constraint
/// id 0, side L on level 1 and side R on level 2.
inline TagAutomaton build_single_mismatch_ta(const ConcatSkeleton& sk) {
    const TagAutomaton& base = sk.ta;
    TagAutomaton ta;
    ta.base_states = base.num_states;
    ta.copies = 3;
    ta.num_states = base.num_states * 3;

    for (State q : base.initial) ta.initial.insert(ta.state_id(q, 1));
    for (State q : base.final) {
        ta.final.insert(ta.state_id(q, 1));
        ta.final.insert(ta.state_id(q, 3));
    }

    for (int32_t id = 0; id < static_cast<int32_t>(base.transitions.size()); ++id) {
        const auto& t = base.transitions[id];
        if (!t.reads_symbol()) {
            // connector, replicated per copy
            for (int c = 1; c <= 3; ++c)
                ta.add_transition(ta.state_id(t.src, c), {}, ta.state_id(t.dst, c), id);
            continue;
        }
        SymbolCode a = -1;
        VarId z = -1;
        for (const auto& g : t.tags) {
            if (g.kind == Tag::Kind::Sym) a = g.sym;
            if (g.kind == Tag::Kind::Len) z = g.var;
        }
        for (int c = 1; c <= 3; ++c)
            ta.add_transition(ta.state_id(t.src, c),
                              {Tag::symbol(a), Tag::len(z), Tag::pos(c, z)},
                              ta.state_id(t.dst, c), id);
        ta.add_transition(ta.state_id(t.src, 1),
                          {Tag::symbol(a), Tag::len(z), Tag::mis(1, z, 0, Side::L, a),
                           Tag::pos(2, z)},
                          ta.state_id(t.dst, 2), id);
        ta.add_transition(ta.state_id(t.src, 2),
                          {Tag::symbol(a), Tag::len(z), Tag::mis(2, z, 0, Side::R, a),
                           Tag::pos(3, z)},
                          ta.state_id(t.dst, 3), id);
    }
    return ta;
}

/// 2K+1 copies of the skeleton; level-advance transitions either sample a
/// symbol (Mis, for any constraint and side) or reuse the previous sample
/// (Cop self-jumps, level >= 2). Accepting copies are the odd ones.
///
/// With cop_within_block, Cop jumps are emitted only at states of the tag
/// variable's own block; every satisfiable sharing still has a run because
/// a Cop can always be taken at the sampling transition's target state.
inline TagAutomaton build_multi_mismatch_ta(const ConcatSkeleton& sk, int K,
                                            bool cop_within_block = false) {
    if (K < 1) throw std::invalid_argument("K must be at least 1");
    const TagAutomaton& base = sk.ta;
    const int copies = 2 * K + 1;

    TagAutomaton ta;
    ta.base_states = base.num_states;
    ta.copies = copies;
    ta.num_states = base.num_states * copies;

    for (State q : base.initial) ta.initial.insert(ta.state_id(q, 1));
    for (State q : base.final)
        for (int c = 1; c <= copies; c += 2) ta.final.insert(ta.state_id(q, c));

    for (int32_t id = 0; id < static_cast<int32_t>(base.transitions.size()); ++id) {
        const auto& t = base.transitions[id];
        if (!t.reads_symbol()) {
            for (int c = 1; c <= copies; ++c)
                ta.add_transition(ta.state_id(t.src, c), {}, ta.state_id(t.dst, c), id);
            continue;
        }
        SymbolCode a = -1;
        VarId z = -1;
        for (const auto& g : t.tags) {
            if (g.kind == Tag::Kind::Sym) a = g.sym;
            if (g.kind == Tag::Kind::Len) z = g.var;
        }
        for (int c = 1; c <= copies; ++c)
            ta.add_transition(ta.state_id(t.src, c),
                              {Tag::symbol(a), Tag::len(z), Tag::pos(c, z)},
                              ta.state_id(t.dst, c), id);
        for (int lvl = 1; lvl <= 2 * K; ++lvl)
            for (ConstraintId d = 0; d < K; ++d)
                for (Side s : {Side::L, Side::R})
                    ta.add_transition(ta.state_id(t.src, lvl),
                                      {Tag::symbol(a), Tag::len(z),
                                       Tag::mis(lvl, z, d, s, a), Tag::pos(lvl + 1, z)},
                                      ta.state_id(t.dst, lvl + 1), id);
    }

    for (State q = 0; q < base.num_states; ++q) {
        for (int lvl = 2; lvl <= 2 * K; ++lvl) {
            for (VarId x : sk.order) {
                if (cop_within_block && sk.var_of_state[q] != x) continue;
                for (ConstraintId d = 0; d < K; ++d)
                    for (Side s : {Side::L, Side::R})
                        ta.add_transition(ta.state_id(q, lvl), {Tag::cop(lvl, x, d, s)},
                                          ta.state_id(q, lvl + 1), -1);
            }
        }
    }
    return ta;
}

/// An accepting run together with its Parikh images over transitions and
/// tags. Test and decoding instrument.
struct TaRun {
    std::vector<int32_t> transition_seq;        // indices into ta.transitions
    std::map<int32_t, int> transition_count;
    std::map<Tag, int> tag_count;
};

/// All accepting runs with at most max_len transitions (exponential; meant
/// for small automata in tests).
inline std::vector<TaRun> enumerate_runs(const TagAutomaton& ta, int max_len) {
    std::vector<TaRun> result;
    std::vector<std::vector<int32_t>> out_of(ta.num_states);
    for (int32_t i = 0; i < static_cast<int32_t>(ta.transitions.size()); ++i)
        out_of[ta.transitions[i].src].push_back(i);

    std::vector<int32_t> path;
    auto record = [&] {
        TaRun run;
        run.transition_seq = path;
        for (int32_t i : path) {
            run.transition_count[i]++;
            for (const auto& g : ta.transitions[i].tags) run.tag_count[g]++;
        }
        result.push_back(std::move(run));
    };

    std::function<void(State)> dfs = [&](State q) {
        if (ta.final.count(q)) record();
        if (static_cast<int>(path.size()) >= max_len) return;
        for (int32_t i : out_of[q]) {
            path.push_back(i);
            dfs(ta.transitions[i].dst);
            path.pop_back();
        }
    };
    for (State q : ta.initial) dfs(q);
    return result;
}

/// One transition per line: `src -{tag,...}-> dst  #origin=<id|none>`.
inline std::string dump(const TagAutomaton& ta, const Alphabet& sigma) {
    std::ostringstream os;
    for (const auto& t : ta.transitions) {
        os << t.src << " -{";
        for (size_t i = 0; i < t.tags.size(); ++i) {
            if (i) os << ",";
            os << tag_name(t.tags[i], sigma);
        }
        os << "}-> " << t.dst << "  #origin=";
        if (t.origin >= 0)
            os << t.origin;
        else
            os << "none";
        os << "\n";
    }
    return os.str();
}

}  // namespace posc
