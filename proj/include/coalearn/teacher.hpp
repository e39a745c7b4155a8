// The oracle side of the learning game: theory (membership) queries, base
// queries, equivalence queries and counterexample synthesis.

#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coalearn/logic.hpp"
#include "coalearn/reachability.hpp"
#include "coalearn/system.hpp"

namespace coalearn {

struct QueryCounters {
    long membership = 0;   // distinct (state, test) evaluations
    long equivalence = 0;
    long base = 0;         // per-state successor/dynamics queries
};

struct EquivalenceAnswer {
    bool correct = false;
    Test counterexample;  // meaningful iff !correct
};

namespace detail {

// Shortest (then shortlex-least) word on which two deterministic systems
// disagree, via BFS over the synchronous product. Empty optional = none.
// For Mealy machines the disagreement is an output mismatch on the last
// letter; for DFAs it is an acceptance mismatch (the empty word counts).
inline std::optional<Word> product_counterexample(const PointedSystem& a,
                                                  const PointedSystem& b) {
    const int nb = b.num_states();
    const int na_letters = a.num_letters();
    auto pair_id = [&](StateIndex x, StateIndex y) { return x * nb + y; };

    std::vector<int> parent(static_cast<std::size_t>(a.num_states()) * nb, -1);
    std::vector<LetterIndex> via(parent.size(), -1);
    std::vector<bool> seen(parent.size(), false);

    auto word_to = [&](int id, LetterIndex extra) {
        Word w;
        if (extra >= 0) w.push_back(extra);
        while (via[id] >= 0) {
            w.push_back(via[id]);
            id = parent[id];
        }
        std::reverse(w.begin(), w.end());
        return w;
    };

    std::deque<int> queue;
    auto discover = [&](int id, int from, LetterIndex letter) {
        if (seen[id]) return false;
        seen[id] = true;
        parent[id] = from;
        via[id] = letter;
        queue.push_back(id);
        if (a.kind == SystemKind::Dfa) {
            StateIndex x = id / nb, y = id % nb;
            return a.accepting[x] != b.accepting[y];
        }
        return false;
    };

    int root = pair_id(a.initial, b.initial);
    if (discover(root, -1, -1)) return Word{};
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        StateIndex x = id / nb, y = id % nb;
        for (LetterIndex l = 0; l < na_letters; ++l) {
            StateIndex xn, yn;
            if (a.kind == SystemKind::Dfa) {
                xn = a.dfa_next[a.at(x, l)];
                yn = b.dfa_next[b.at(y, l)];
            } else {
                auto [ox, tx] = a.mealy_step[a.at(x, l)];
                auto [oy, ty] = b.mealy_step[b.at(y, l)];
                if (ox != oy) return word_to(id, l);
                xn = tx;
                yn = ty;
            }
            int next = pair_id(xn, yn);
            if (discover(next, id, l)) return word_to(next, -1);
        }
    }
    return std::nullopt;
}

// Distinguishing-formula synthesis from the partition refinement history of
// a single LTS containing both states. The result is true at x and false
// at y. Positive witnesses (an x-successor no y-successor can match) are
// preferred; otherwise the formula is negated.
inline FormulaPtr distinguish(const PointedSystem& u, const RefinementHistory& hist,
                              StateIndex x, StateIndex y) {
    const int k = hist.separation_level(x, y);
    if (k <= 0) throw InternalError("distinguish called on equivalent states");
    const Partition& prev = hist.rounds[k - 1];

    auto conjunction = [&](StateIndex witness, const std::vector<StateIndex>& others) {
        std::vector<FormulaPtr> parts;
        for (StateIndex o : others) {
            FormulaPtr d = distinguish(u, hist, witness, o);
            bool dup = false;
            for (const auto& p : parts) dup = dup || formula_equal(p, d);
            if (!dup) parts.push_back(d);
        }
        if (parts.empty()) return f_top();
        std::sort(parts.begin(), parts.end(), formula_less);
        FormulaPtr acc = parts.front();
        for (std::size_t i = 1; i < parts.size(); ++i) acc = f_and(acc, parts[i]);
        return acc;
    };

    auto find_in_block = [&](const std::vector<StateIndex>& succs, int block) {
        for (StateIndex s : succs)
            if (prev.block_of[s] == block) return s;
        return StateIndex{-1};
    };

    for (int pass = 0; pass < 2; ++pass) {
        for (LetterIndex a = 0; a < u.num_letters(); ++a) {
            const auto& xs = u.lts_succ[u.at(x, a)];
            const auto& ys = u.lts_succ[u.at(y, a)];
            for (int block = 0; block < prev.num_blocks; ++block) {
                StateIndex xw = find_in_block(xs, block);
                StateIndex yw = find_in_block(ys, block);
                if (pass == 0 && xw >= 0 && yw < 0)
                    return f_diamond(u.alphabet.letters[a], conjunction(xw, ys));
                if (pass == 1 && yw >= 0 && xw < 0)
                    return f_not(f_diamond(u.alphabet.letters[a], conjunction(yw, xs)));
            }
        }
    }
    throw InternalError("distinguish: no splitting action found");
}

inline void collect_subformulas(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (!f) return;
    out.push_back(f);
    collect_subformulas(f->lhs, out);
    collect_subformulas(f->rhs, out);
}

}  // namespace detail

/// Holds the hidden system and answers the learner's queries. Owns the
/// memoization cache for theory evaluations, so suite growth does not
/// re-evaluate old cells.
class Teacher {
  public:
    explicit Teacher(PointedSystem sys) : sys_(std::move(sys)) {
        auto report = validate_system(sys_);
        if (!report.empty()) {
            std::string msg = "invalid system:";
            for (const auto& v : report) msg += "\n  - " + v;
            throw InputError(msg);
        }
    }

    const PointedSystem& system() const { return sys_; }
    SystemKind kind() const { return sys_.kind; }
    const Alphabet& alphabet() const { return sys_.alphabet; }
    StateIndex initial() const { return sys_.initial; }
    const QueryCounters& counters() const { return counters_; }

    /// Theory query: the row of each requested state over the suite.
    std::map<StateIndex, Row> fill_rows(const std::vector<StateIndex>& states,
                                        const TestSuite& suite) {
        std::map<StateIndex, Row> rows;
        for (StateIndex x : states) rows[x] = row(x, suite);
        return rows;
    }

    Row row(StateIndex x, const TestSuite& suite) {
        Row r;
        r.reserve(suite.tests.size());
        for (const Test& t : suite.tests) {
            std::string tkey;
            if (t.kind == SystemKind::Lts) {
                tkey = "f:" + t.formula->text;
            } else {
                tkey = "w:";
                for (LetterIndex a : t.word) tkey += std::to_string(a) + ',';
            }
            auto key = std::make_pair(x, std::move(tkey));
            auto it = memo_.find(key);
            if (it == memo_.end()) {
                ++counters_.membership;
                it = memo_.emplace(key, eval_test(sys_, x, t)).first;
            }
            r.push_back(it->second);
        }
        return r;
    }

    /// Base query: ordered successor set per requested state.
    std::map<StateIndex, std::vector<StateIndex>> base_query(
        const std::vector<StateIndex>& states) {
        std::map<StateIndex, std::vector<StateIndex>> out;
        for (StateIndex x : states) {
            ++counters_.base;
            out[x] = successors(sys_, x);
        }
        return out;
    }

    /// Per-state one-step structure (the base morphism at x). Counted as a
    /// base query.
    StateDynamics dynamics(StateIndex x) {
        ++counters_.base;
        return state_dynamics(sys_, x);
    }

    /// Equivalence query: CORRECT iff the conjecture's initial state is
    /// logically equivalent to the teacher's (language equality for DFA and
    /// Mealy, bisimilarity for LTS). Otherwise returns a verified
    /// distinguishing test: the shortest, shortlex-least word for
    /// deterministic kinds, a minimized modal formula for LTSs.
    EquivalenceAnswer equivalence_query(const PointedSystem& conj) {
        check_protocol(conj);
        ++counters_.equivalence;
        EquivalenceAnswer ans;
        if (sys_.kind == SystemKind::Lts) {
            const PointedSystem u = disjoint_union(sys_, conj);
            const RefinementHistory hist = refinement_history(u);
            const StateIndex croot = sys_.num_states() + conj.initial;
            if (hist.final().block_of[sys_.initial] == hist.final().block_of[croot]) {
                ans.correct = true;
                return ans;
            }
            FormulaPtr phi = detail::distinguish(u, hist, sys_.initial, croot);
            ans.counterexample = Test::of_formula(minimize_counterexample(phi, conj));
        } else {
            auto word = detail::product_counterexample(sys_, conj);
            if (!word) {
                ans.correct = true;
                return ans;
            }
            ans.counterexample = Test::of_word(sys_.kind, *word);
        }
        if (!verify_counterexample(conj, ans.counterexample))
            throw InternalError("equivalence query produced a non-distinguishing test");
        return ans;
    }

    /// True iff the test evaluates differently at the two initial states.
    bool verify_counterexample(const PointedSystem& conj, const Test& t) const {
        return eval_test(sys_, sys_.initial, t) != eval_test(conj, conj.initial, t);
    }

  private:
    void check_protocol(const PointedSystem& conj) const {
        if (conj.kind != sys_.kind || !(conj.alphabet == sys_.alphabet) ||
            conj.outputs != sys_.outputs)
            throw InputError("conjecture kind/alphabet does not match the teacher");
        if (!validate_system(conj).empty())
            throw InputError("conjecture is not a well-formed system");
    }

    // Smallest subformula (size, then rendering) that still distinguishes
    // the two initial states.
    FormulaPtr minimize_counterexample(const FormulaPtr& phi, const PointedSystem& conj) const {
        std::vector<FormulaPtr> subs;
        detail::collect_subformulas(phi, subs);
        std::sort(subs.begin(), subs.end(), formula_less);
        for (const auto& f : subs) {
            Test t = Test::of_formula(f);
            if (eval_test(sys_, sys_.initial, t) != eval_test(conj, conj.initial, t)) return f;
        }
        return phi;
    }

    PointedSystem sys_;
    QueryCounters counters_;
    std::map<std::pair<StateIndex, std::string>, TruthValue> memo_;
};

}  // namespace coalearn
