// Finite pointed systems: deterministic automata, Mealy machines and
// labelled transition systems, with their one-step dynamics.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coalearn {

/// Malformed input: bad files, bad queries, bad tests.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A broken internal contract (caller bug or algorithm bug).
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

enum class SystemKind { Dfa, Mealy, Lts };

inline std::string to_string(SystemKind k) {
    switch (k) {
        case SystemKind::Dfa: return "dfa";
        case SystemKind::Mealy: return "mealy";
        case SystemKind::Lts: return "lts";
    }
    return "?";
}

using StateIndex = int;
using LetterIndex = int;
using Word = std::vector<LetterIndex>;

/// Ordered input alphabet. The listed order is the tie-breaking order used
/// everywhere, so runs are reproducible.
struct Alphabet {
    std::vector<std::string> letters;

    int size() const { return static_cast<int>(letters.size()); }

    std::optional<LetterIndex> index_of(std::string_view name) const {
        for (int i = 0; i < size(); ++i)
            if (letters[i] == name) return i;
        return std::nullopt;
    }

    bool operator==(const Alphabet&) const = default;
};

/// One-step dynamics of a single state, indexed by letter. Only the fields
/// matching the system kind are populated.
struct StateDynamics {
    SystemKind kind = SystemKind::Dfa;
    bool accepting = false;                              // DFA
    std::vector<StateIndex> next;                        // DFA: per letter
    std::vector<std::pair<int, StateIndex>> step;        // Mealy: per letter (output, target)
    std::vector<std::vector<StateIndex>> succ;           // LTS: per letter, sorted, deduped

    bool operator==(const StateDynamics&) const = default;
};

/// A finite pointed coalgebra of one of the three kinds. Immutable after
/// construction; all algorithms treat it as a value.
struct PointedSystem {
    SystemKind kind = SystemKind::Dfa;
    Alphabet alphabet;
    std::vector<std::string> outputs;      // Mealy only
    std::vector<std::string> state_names;  // index = dense ordinal
    StateIndex initial = 0;

    // DFA: accepting[x], next[x * |A| + a]
    std::vector<bool> accepting;
    std::vector<StateIndex> dfa_next;
    // Mealy: step[x * |A| + a] = (output index, target)
    std::vector<std::pair<int, StateIndex>> mealy_step;
    // LTS: succ[x * |A| + a] = sorted list of targets
    std::vector<std::vector<StateIndex>> lts_succ;

    int num_states() const { return static_cast<int>(state_names.size()); }
    int num_letters() const { return alphabet.size(); }

    std::size_t at(StateIndex x, LetterIndex a) const {
        return static_cast<std::size_t>(x) * num_letters() + a;
    }

    std::optional<StateIndex> state_index(std::string_view name) const {
        for (int i = 0; i < num_states(); ++i)
            if (state_names[i] == name) return i;
        return std::nullopt;
    }
};

namespace detail {

inline bool valid_state(const PointedSystem& sys, StateIndex x) {
    return x >= 0 && x < sys.num_states();
}

}  // namespace detail

/// Checks every structural invariant and returns one message per violation.
/// An empty report means the system is well-formed.
inline std::vector<std::string> validate_system(const PointedSystem& sys) {
    std::vector<std::string> report;
    const int n = sys.num_states();
    const int na = sys.num_letters();

    if (na == 0) report.push_back("alphabet is empty");
    {
        std::set<std::string> seen;
        for (const auto& l : sys.alphabet.letters)
            if (!seen.insert(l).second)
                report.push_back("duplicate alphabet letter '" + l + "'");
    }
    if (n == 0) report.push_back("state list is empty");
    {
        std::set<std::string> seen;
        for (const auto& s : sys.state_names)
            if (!seen.insert(s).second)
                report.push_back("duplicate state name '" + s + "'");
    }
    if (!detail::valid_state(sys, sys.initial))
        report.push_back("initial state is not in the state list");

    auto bad_target = [&](StateIndex t) { return !detail::valid_state(sys, t); };
    auto cell_name = [&](StateIndex x, LetterIndex a) {
        return "(" + sys.state_names[x] + ", " + sys.alphabet.letters[a] + ")";
    };

    switch (sys.kind) {
        case SystemKind::Dfa: {
            if (static_cast<int>(sys.accepting.size()) != n)
                report.push_back("accepting map is not total on states");
            if (static_cast<int>(sys.dfa_next.size()) != n * na) {
                report.push_back("transition map is not total on states x letters");
                break;
            }
            for (StateIndex x = 0; x < n; ++x)
                for (LetterIndex a = 0; a < na; ++a)
                    if (bad_target(sys.dfa_next[sys.at(x, a)]))
                        report.push_back("missing or dangling transition at " + cell_name(x, a));
            break;
        }
        case SystemKind::Mealy: {
            if (sys.outputs.empty()) report.push_back("output alphabet is empty");
            {
                std::set<std::string> seen;
                for (const auto& o : sys.outputs)
                    if (!seen.insert(o).second)
                        report.push_back("duplicate output symbol '" + o + "'");
            }
            if (static_cast<int>(sys.mealy_step.size()) != n * na) {
                report.push_back("step map is not total on states x letters");
                break;
            }
            for (StateIndex x = 0; x < n; ++x)
                for (LetterIndex a = 0; a < na; ++a) {
                    auto [o, t] = sys.mealy_step[sys.at(x, a)];
                    if (o < 0 || o >= static_cast<int>(sys.outputs.size()))
                        report.push_back("output outside output alphabet at " + cell_name(x, a));
                    if (bad_target(t))
                        report.push_back("missing or dangling transition at " + cell_name(x, a));
                }
            break;
        }
        case SystemKind::Lts: {
            if (static_cast<int>(sys.lts_succ.size()) != n * na) {
                report.push_back("successor map is not total on states x letters");
                break;
            }
            for (StateIndex x = 0; x < n; ++x)
                for (LetterIndex a = 0; a < na; ++a) {
                    const auto& ts = sys.lts_succ[sys.at(x, a)];
                    for (StateIndex t : ts)
                        if (bad_target(t))
                            report.push_back("transition target not in state list at " +
                                             cell_name(x, a));
                    if (!std::is_sorted(ts.begin(), ts.end()) ||
                        std::adjacent_find(ts.begin(), ts.end()) != ts.end())
                        report.push_back("successor set not sorted/deduplicated at " +
                                         cell_name(x, a));
                }
            break;
        }
    }
    return report;
}

/// One-step dynamics of state `x`, read off the system.
inline StateDynamics state_dynamics(const PointedSystem& sys, StateIndex x) {
    if (!detail::valid_state(sys, x)) throw InputError("unknown state in dynamics query");
    StateDynamics d;
    d.kind = sys.kind;
    const int na = sys.num_letters();
    switch (sys.kind) {
        case SystemKind::Dfa:
            d.accepting = sys.accepting[x];
            d.next.resize(na);
            for (LetterIndex a = 0; a < na; ++a) d.next[a] = sys.dfa_next[sys.at(x, a)];
            break;
        case SystemKind::Mealy:
            d.step.resize(na);
            for (LetterIndex a = 0; a < na; ++a) d.step[a] = sys.mealy_step[sys.at(x, a)];
            break;
        case SystemKind::Lts:
            d.succ.resize(na);
            for (LetterIndex a = 0; a < na; ++a) d.succ[a] = sys.lts_succ[sys.at(x, a)];
            break;
    }
    return d;
}

/// All one-step successors of `x`, deduplicated, ordered by state ordinal.
/// This is the base of the dynamics restricted to the singleton {x}.
inline std::vector<StateIndex> successors(const PointedSystem& sys, StateIndex x) {
    if (!detail::valid_state(sys, x)) throw InputError("unknown state in successor query");
    std::set<StateIndex> out;
    const int na = sys.num_letters();
    switch (sys.kind) {
        case SystemKind::Dfa:
            for (LetterIndex a = 0; a < na; ++a) out.insert(sys.dfa_next[sys.at(x, a)]);
            break;
        case SystemKind::Mealy:
            for (LetterIndex a = 0; a < na; ++a) out.insert(sys.mealy_step[sys.at(x, a)].second);
            break;
        case SystemKind::Lts:
            for (LetterIndex a = 0; a < na; ++a)
                for (StateIndex t : sys.lts_succ[sys.at(x, a)]) out.insert(t);
            break;
    }
    return {out.begin(), out.end()};
}

/// The dynamics of `x` with every successor replaced by its image under
/// `rep`. `rep` must cover all successors of `x`; a gap is a caller bug
/// (an unclosed table).
inline StateDynamics retarget(const PointedSystem& sys, StateIndex x,
                              const std::map<StateIndex, StateIndex>& rep) {
    auto apply = [&](StateIndex t) {
        auto it = rep.find(t);
        if (it == rep.end())
            throw InternalError("retarget: representative map undefined on successor '" +
                                sys.state_names[t] + "'");
        return it->second;
    };
    StateDynamics d = state_dynamics(sys, x);
    for (auto& t : d.next) t = apply(t);
    for (auto& [o, t] : d.step) t = apply(t);
    for (auto& ts : d.succ) {
        std::set<StateIndex> mapped;
        for (StateIndex t : ts) mapped.insert(apply(t));
        ts.assign(mapped.begin(), mapped.end());
    }
    return d;
}

/// Disjoint union of two systems of the same kind and alphabet; states of
/// `b` are appended after those of `a` (offset = a.num_states()). The point
/// of the union is a's initial state.
inline PointedSystem disjoint_union(const PointedSystem& a, const PointedSystem& b) {
    if (a.kind != b.kind || !(a.alphabet == b.alphabet) || a.outputs != b.outputs)
        throw InputError("disjoint union requires matching kind, alphabet and outputs");
    PointedSystem u = a;
    const int off = a.num_states();
    for (int i = 0; i < b.num_states(); ++i) u.state_names.push_back("#" + b.state_names[i]);
    u.accepting.insert(u.accepting.end(), b.accepting.begin(), b.accepting.end());
    for (StateIndex t : b.dfa_next) u.dfa_next.push_back(t + off);
    for (auto [o, t] : b.mealy_step) u.mealy_step.emplace_back(o, t + off);
    for (const auto& ts : b.lts_succ) {
        std::vector<StateIndex> shifted;
        shifted.reserve(ts.size());
        for (StateIndex t : ts) shifted.push_back(t + off);
        u.lts_succ.push_back(std::move(shifted));
    }
    return u;
}

}  // namespace coalearn
