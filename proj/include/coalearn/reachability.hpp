// Successor operator on state sets, reachability as a least fixpoint, and
// partition-refinement minimization (the logical quotient).

#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coalearn/system.hpp"

namespace coalearn {

/// Ordered subset of a system's states.
using StateSet = std::vector<StateIndex>;  // sorted, unique

/// All one-step successors of the states in `S`, deduplicated and ordered.
inline StateSet gamma(const PointedSystem& sys, const StateSet& S) {
    std::set<StateIndex> out;
    for (StateIndex x : S)
        for (StateIndex y : successors(sys, x)) out.insert(y);
    return {out.begin(), out.end()};
}

inline bool is_subcoalgebra(const PointedSystem& sys, const StateSet& S) {
    return std::ranges::includes(S, gamma(sys, S));
}

/// Least fixpoint of S |-> gamma(S) u {initial}, by Kleene iteration from
/// the empty set. Stabilizes in at most |states| steps.
inline StateSet reachable_part(const PointedSystem& sys) {
    StateSet cur;
    for (;;) {
        std::set<StateIndex> next(cur.begin(), cur.end());
        next.insert(sys.initial);
        for (StateIndex y : gamma(sys, cur)) next.insert(y);
        StateSet stepped(next.begin(), next.end());
        if (stepped == cur) return cur;
        cur = std::move(stepped);
    }
}

// ---------------------------------------------------------------------------
// Partition refinement

/// A partition of the full state space; block ids are dense and numbered by
/// first occurrence in state order.
struct Partition {
    std::vector<int> block_of;
    int num_blocks = 0;

    bool operator==(const Partition&) const = default;
};

namespace detail {

inline Partition canonical_partition(const std::vector<std::string>& keys) {
    Partition p;
    p.block_of.resize(keys.size());
    std::map<std::string, int> ids;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto [it, fresh] = ids.emplace(keys[i], p.num_blocks);
        if (fresh) ++p.num_blocks;
        p.block_of[i] = it->second;
    }
    return p;
}

// Signature of a state w.r.t. the previous partition; refining by these
// keys (which embed the previous block id) splits every block at once.
inline std::string refinement_key(const PointedSystem& sys, StateIndex x, const Partition& prev) {
    std::string key = std::to_string(prev.block_of[x]);
    for (LetterIndex a = 0; a < sys.num_letters(); ++a) {
        key += ';';
        switch (sys.kind) {
            case SystemKind::Dfa:
                key += std::to_string(prev.block_of[sys.dfa_next[sys.at(x, a)]]);
                break;
            case SystemKind::Mealy:
                key += std::to_string(prev.block_of[sys.mealy_step[sys.at(x, a)].second]);
                break;
            case SystemKind::Lts: {
                std::set<int> blocks;
                for (StateIndex y : sys.lts_succ[sys.at(x, a)]) blocks.insert(prev.block_of[y]);
                for (int b : blocks) key += std::to_string(b) + ',';
                break;
            }
        }
    }
    return key;
}

}  // namespace detail

/// The sequence of partitions computed by simultaneous refinement, ending
/// with the stable one. rounds[0] is the seed partition.
struct RefinementHistory {
    std::vector<Partition> rounds;

    const Partition& final() const { return rounds.back(); }

    /// First round at which x and y land in different blocks; -1 if never.
    int separation_level(StateIndex x, StateIndex y) const {
        for (std::size_t i = 0; i < rounds.size(); ++i)
            if (rounds[i].block_of[x] != rounds[i].block_of[y]) return static_cast<int>(i);
        return -1;
    }
};

/// Runs partition refinement to the fixpoint. The seed observes acceptance
/// (DFA) or per-letter outputs (Mealy); LTS refinement starts from a single
/// block, so the result is the bisimilarity partition.
inline RefinementHistory refinement_history(const PointedSystem& sys) {
    const int n = sys.num_states();
    std::vector<std::string> seed(n);
    for (StateIndex x = 0; x < n; ++x) {
        switch (sys.kind) {
            case SystemKind::Dfa: seed[x] = sys.accepting[x] ? "1" : "0"; break;
            case SystemKind::Mealy:
                for (LetterIndex a = 0; a < sys.num_letters(); ++a)
                    seed[x] += std::to_string(sys.mealy_step[sys.at(x, a)].first) + ',';
                break;
            case SystemKind::Lts: seed[x] = ""; break;
        }
    }
    RefinementHistory hist;
    hist.rounds.push_back(detail::canonical_partition(seed));
    for (;;) {
        const Partition& prev = hist.rounds.back();
        std::vector<std::string> keys(n);
        for (StateIndex x = 0; x < n; ++x) keys[x] = detail::refinement_key(sys, x, prev);
        Partition next = detail::canonical_partition(keys);
        if (next == prev) return hist;
        hist.rounds.push_back(std::move(next));
    }
}

/// The partition by logical equivalence (= language equivalence for DFA and
/// Mealy, bisimilarity for LTS).
inline Partition logical_partition(const PointedSystem& sys) {
    return refinement_history(sys).final();
}

/// Partition plus the minimized system built on the reachable blocks.
struct Quotient {
    Partition partition;
    PointedSystem minimized;
    std::vector<StateIndex> representatives;  // minimized state -> original state
};

/// Collapses the system by logical equivalence and restricts to the blocks
/// reachable from the initial one. Block representatives are the least
/// reachable members; the minimized system is named after them.
inline Quotient logical_quotient(const PointedSystem& sys) {
    Quotient q;
    q.partition = logical_partition(sys);
    const StateSet reachable = reachable_part(sys);

    // One representative (least reachable ordinal) per reachable block.
    std::map<int, StateIndex> rep_of_block;
    for (StateIndex x : reachable) rep_of_block.try_emplace(q.partition.block_of[x], x);

    std::vector<StateIndex> reps;
    for (auto [_, rep] : rep_of_block) reps.push_back(rep);
    std::sort(reps.begin(), reps.end());
    q.representatives = reps;

    std::map<int, StateIndex> new_index;  // block id -> minimized state
    PointedSystem& m = q.minimized;
    m.kind = sys.kind;
    m.alphabet = sys.alphabet;
    m.outputs = sys.outputs;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        new_index[q.partition.block_of[reps[i]]] = static_cast<StateIndex>(i);
        m.state_names.push_back(sys.state_names[reps[i]]);
    }
    m.initial = new_index.at(q.partition.block_of[sys.initial]);

    auto target = [&](StateIndex y) { return new_index.at(q.partition.block_of[y]); };
    for (StateIndex rep : reps) {
        switch (sys.kind) {
            case SystemKind::Dfa:
                m.accepting.push_back(sys.accepting[rep]);
                for (LetterIndex a = 0; a < sys.num_letters(); ++a)
                    m.dfa_next.push_back(target(sys.dfa_next[sys.at(rep, a)]));
                break;
            case SystemKind::Mealy:
                for (LetterIndex a = 0; a < sys.num_letters(); ++a) {
                    auto [o, t] = sys.mealy_step[sys.at(rep, a)];
                    m.mealy_step.emplace_back(o, target(t));
                }
                break;
            case SystemKind::Lts:
                for (LetterIndex a = 0; a < sys.num_letters(); ++a) {
                    std::set<StateIndex> ts;
                    for (StateIndex y : sys.lts_succ[sys.at(rep, a)]) ts.insert(target(y));
                    m.lts_succ.emplace_back(ts.begin(), ts.end());
                }
                break;
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// Isomorphism checking (used by the test suites and the CLI)

namespace detail {

// Canonical reachable form of a deterministic system: states renumbered in
// BFS discovery order from the initial state, letters in alphabet order.
inline bool deterministic_isomorphic(const PointedSystem& a, const PointedSystem& b) {
    if (a.num_states() != b.num_states()) return false;
    auto canon = [](const PointedSystem& s) {
        std::vector<StateIndex> order{s.initial};
        std::map<StateIndex, int> id{{s.initial, 0}};
        std::string shape;
        for (std::size_t i = 0; i < order.size(); ++i) {
            StateIndex x = order[i];
            if (s.kind == SystemKind::Dfa) shape += s.accepting[x] ? "1" : "0";
            for (LetterIndex l = 0; l < s.num_letters(); ++l) {
                StateIndex t;
                if (s.kind == SystemKind::Dfa) {
                    t = s.dfa_next[s.at(x, l)];
                } else {
                    auto [o, tgt] = s.mealy_step[s.at(x, l)];
                    shape += "o" + std::to_string(o);
                    t = tgt;
                }
                auto [it, fresh] = id.emplace(t, static_cast<int>(order.size()));
                if (fresh) order.push_back(t);
                shape += ">" + std::to_string(it->second) + ";";
            }
        }
        if (static_cast<int>(order.size()) != s.num_states()) shape += "!unreachable";
        return shape;
    };
    return canon(a) == canon(b);
}

inline bool lts_isomorphic(const PointedSystem& a, const PointedSystem& b) {
    if (a.num_states() != b.num_states()) return false;
    const PointedSystem u = disjoint_union(a, b);
    const Partition p = logical_partition(u);
    const int off = a.num_states();
    // Pair up states by bisimilarity; for minimal systems this is the only
    // candidate bijection.
    std::map<int, StateIndex> left, right;
    for (StateIndex x = 0; x < off; ++x)
        if (!left.emplace(p.block_of[x], x).second) return false;
    for (StateIndex y = 0; y < b.num_states(); ++y)
        if (!right.emplace(p.block_of[off + y], y).second) return false;
    if (left.size() != right.size()) return false;
    std::map<StateIndex, StateIndex> to_b;
    for (auto [block, x] : left) {
        auto it = right.find(block);
        if (it == right.end()) return false;
        to_b[x] = it->second;
    }
    if (to_b.at(a.initial) != b.initial) return false;
    for (auto [x, y] : to_b)
        for (LetterIndex l = 0; l < a.num_letters(); ++l) {
            std::set<StateIndex> mapped;
            for (StateIndex t : a.lts_succ[a.at(x, l)]) mapped.insert(to_b.at(t));
            const auto& expect = b.lts_succ[b.at(y, l)];
            if (!std::equal(mapped.begin(), mapped.end(), expect.begin(), expect.end()))
                return false;
        }
    return true;
}

}  // namespace detail

/// True iff the systems are identical up to a renaming of states. For LTSs
/// both sides are expected to be minimal (pairwise non-bisimilar states).
inline bool isomorphic(const PointedSystem& a, const PointedSystem& b) {
    if (a.kind != b.kind || !(a.alphabet == b.alphabet) || a.outputs != b.outputs) return false;
    if (a.kind == SystemKind::Lts) return detail::lts_isomorphic(a, b);
    return detail::deterministic_isomorphic(a, b);
}

}  // namespace coalearn
