#pragma once

#include <gmpxx.h>

#include <cassert>
#include <map>
#include <optional>
#include <vector>

#include "posc/lia.hpp"

namespace posc::lia {

/// Where a variable bound came from; decides whether an infeasibility may
/// blame the configured search box (honest UNKNOWN) or is a real conflict.
enum class BoundOrigin : uint8_t { None, Box, Atom, Branch };

/// Incremental feasibility solver for conjunctions of bounds over linear
/// rows, in the style of the simplex used by lazy SMT solvers: every
/// constraint is a bound on a (possibly slack) variable, pivoting uses
/// Bland's rule (smallest index first), arithmetic is exact rational.
class Simplex {
public:
    struct Bound {
        bool present = false;
        mpq_class value;
        BoundOrigin origin = BoundOrigin::None;
    };

    struct CheckResult {
        bool feasible;
        bool box_involved;  // a Box-origin bound participated in the conflict
    };

    int new_variable() {
        int v = static_cast<int>(vars_.size());
        vars_.push_back({});
        return v;
    }

    /// Introduces a basic variable defined as a linear combination of
    /// existing variables (basic ones are substituted away so the row only
    /// references nonbasic columns).
    int new_slack(const std::vector<std::pair<int, Int>>& terms) {
        Row row;
        for (auto [v, c] : terms) {
            mpq_class k(static_cast<long>(c));
            if (vars_[v].is_basic) {
                for (const auto& [col, coeff] : vars_[v].row) add_to(row, col, k * coeff);
            } else {
                add_to(row, v, k);
            }
        }
        int s = new_variable();
        vars_[s].is_basic = true;
        vars_[s].row = std::move(row);
        mpq_class acc = 0;
        for (const auto& [col, coeff] : vars_[s].row) acc += coeff * vars_[col].value;
        vars_[s].value = acc;
        basics_.push_back(s);
        return s;
    }

    const mpq_class& value(int v) const { return vars_[v].value; }
    bool has_lower(int v) const { return vars_[v].lower.present; }
    bool has_upper(int v) const { return vars_[v].upper.present; }
    const Bound& lower(int v) const { return vars_[v].lower; }
    const Bound& upper(int v) const { return vars_[v].upper; }

    struct Mark {
        size_t trail_size;
    };
    Mark mark() const { return {trail_.size()}; }

    void rollback(const Mark& m) {
        while (trail_.size() > m.trail_size) {
            const TrailEntry& e = trail_.back();
            (e.was_lower ? vars_[e.var].lower : vars_[e.var].upper) = e.old_bound;
            trail_.pop_back();
        }
    }

    /// Tightens a bound. Returns false on an immediate clash with the
    /// opposite bound; *box_involved reports whether the clash blames the
    /// search box.
    bool assert_lower(int v, const mpq_class& b, BoundOrigin origin, bool* box_involved) {
        Bound& lo = vars_[v].lower;
        if (lo.present && lo.value >= b) return true;
        if (vars_[v].upper.present && b > vars_[v].upper.value) {
            if (box_involved)
                *box_involved =
                    origin == BoundOrigin::Box || vars_[v].upper.origin == BoundOrigin::Box;
            return false;
        }
        trail_.push_back({v, true, lo});
        lo = {true, b, origin};
        if (!vars_[v].is_basic && vars_[v].value < b) update(v, b);
        return true;
    }

    bool assert_upper(int v, const mpq_class& b, BoundOrigin origin, bool* box_involved) {
        Bound& up = vars_[v].upper;
        if (up.present && up.value <= b) return true;
        if (vars_[v].lower.present && b < vars_[v].lower.value) {
            if (box_involved)
                *box_involved =
                    origin == BoundOrigin::Box || vars_[v].lower.origin == BoundOrigin::Box;
            return false;
        }
        trail_.push_back({v, false, up});
        up = {true, b, origin};
        if (!vars_[v].is_basic && vars_[v].value > b) update(v, b);
        return true;
    }

    /// Re-establishes an assignment within all current bounds, or reports
    /// infeasibility.
    CheckResult check() {
        for (;;) {
            int broken = -1;
            bool needs_increase = false;
            for (int b : basics_) {
                const VarState& vs = vars_[b];
                if (vs.lower.present && vs.value < vs.lower.value) {
                    if (broken < 0 || b < broken) {
                        broken = b;
                        needs_increase = true;
                    }
                } else if (vs.upper.present && vs.value > vs.upper.value) {
                    if (broken < 0 || b < broken) {
                        broken = b;
                        needs_increase = false;
                    }
                }
            }
            if (broken < 0) return {true, false};

            int pivot_col = -1;
            for (const auto& [col, coeff] : vars_[broken].row) {  // map order = Bland
                const VarState& cs = vars_[col];
                bool can_increase = !cs.upper.present || cs.value < cs.upper.value;
                bool can_decrease = !cs.lower.present || cs.value > cs.lower.value;
                bool ok = needs_increase ? (coeff > 0 ? can_increase : can_decrease)
                                         : (coeff > 0 ? can_decrease : can_increase);
                if (ok && coeff != 0) {
                    pivot_col = col;
                    break;
                }
            }
            if (pivot_col < 0) {
                bool box = bound_origin_of(broken, needs_increase) == BoundOrigin::Box;
                for (const auto& [col, coeff] : vars_[broken].row) {
                    if (coeff == 0) continue;
                    bool at_upper = needs_increase == (coeff > 0);
                    if (bound_origin_of(col, !at_upper) == BoundOrigin::Box) box = true;
                }
                return {false, box};
            }
            mpq_class target =
                needs_increase ? vars_[broken].lower.value : vars_[broken].upper.value;
            pivot(broken, pivot_col, target);
        }
    }

    size_t num_vars() const { return vars_.size(); }

private:
    using Row = std::map<int, mpq_class>;  // ordered columns for Bland's rule

    struct VarState {
        mpq_class value;
        Bound lower, upper;
        bool is_basic = false;
        Row row;  // defining row when basic, over nonbasic columns
    };

    struct TrailEntry {
        int var;
        bool was_lower;
        Bound old_bound;
    };

    static void add_to(Row& row, int col, const mpq_class& k) {
        if (k == 0) return;
        mpq_class& slot = row[col];
        slot += k;
        if (slot == 0) row.erase(col);
    }

    BoundOrigin bound_origin_of(int v, bool lower_side) const {
        const Bound& b = lower_side ? vars_[v].lower : vars_[v].upper;
        return b.present ? b.origin : BoundOrigin::None;
    }

    /// Sets nonbasic v to b, adjusting the value of every basic row.
    void update(int v, const mpq_class& b) {
        mpq_class delta = b - vars_[v].value;
        if (delta == 0) return;
        for (int bi : basics_) {
            auto it = vars_[bi].row.find(v);
            if (it != vars_[bi].row.end()) vars_[bi].value += it->second * delta;
        }
        vars_[v].value = b;
    }

    /// Swaps basic `leaving` with nonbasic `entering`, moving the leaving
    /// variable's value to `target`.
    void pivot(int leaving, int entering, const mpq_class& target) {
        const Row old_row = vars_[leaving].row;
        mpq_class a = old_row.at(entering);

        // values first, while rows still reference `entering`
        mpq_class entering_delta = (target - vars_[leaving].value) / a;
        for (int bi : basics_) {
            auto it = vars_[bi].row.find(entering);
            if (it != vars_[bi].row.end()) vars_[bi].value += it->second * entering_delta;
        }
        vars_[entering].value += entering_delta;

        // entering = (leaving - rest) / a
        Row entering_row;
        entering_row[leaving] = 1 / a;
        for (const auto& [col, coeff] : old_row) {
            if (col == entering) continue;
            add_to(entering_row, col, -coeff / a);
        }

        vars_[leaving].is_basic = false;
        vars_[leaving].row.clear();
        vars_[entering].is_basic = true;
        vars_[entering].row = entering_row;
        for (auto& b : basics_)
            if (b == leaving) b = entering;

        for (int bi : basics_) {
            if (bi == entering) continue;
            Row& r = vars_[bi].row;
            auto it = r.find(entering);
            if (it == r.end()) continue;
            mpq_class k = it->second;
            r.erase(it);
            for (const auto& [col, coeff] : entering_row) add_to(r, col, k * coeff);
        }
    }

    std::vector<VarState> vars_;
    std::vector<int> basics_;
    std::vector<TrailEntry> trail_;
};

}  // namespace posc::lia
