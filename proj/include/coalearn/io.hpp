// The system file format (JSON) and DOT export.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "coalearn/system.hpp"

namespace coalearn {

namespace detail {

inline const nlohmann::json& require_key(const nlohmann::json& doc, const std::string& key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw InputError("system file is missing key '" + key + "'");
    return *it;
}

inline std::vector<std::string> string_list(const nlohmann::json& v, const std::string& key) {
    if (!v.is_array()) throw InputError("key '" + key + "' must be a list of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) throw InputError("key '" + key + "' must be a list of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

}  // namespace detail

/// Parses the textual system format. Keys: kind, alphabet, outputs (Mealy),
/// states, initial, accepting (DFA), transitions. The result is validated;
/// any violation is an error.
inline PointedSystem parse_system(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("system file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("system file must be a JSON object");

    PointedSystem sys;
    const std::string kind = detail::require_key(doc, "kind").get<std::string>();
    if (kind == "dfa") sys.kind = SystemKind::Dfa;
    else if (kind == "mealy") sys.kind = SystemKind::Mealy;
    else if (kind == "lts") sys.kind = SystemKind::Lts;
    else throw InputError("unknown kind '" + kind + "' (expected dfa, mealy or lts)");

    sys.alphabet.letters = detail::string_list(detail::require_key(doc, "alphabet"), "alphabet");
    if (sys.kind == SystemKind::Mealy)
        sys.outputs = detail::string_list(detail::require_key(doc, "outputs"), "outputs");
    sys.state_names = detail::string_list(detail::require_key(doc, "states"), "states");

    const std::string initial = detail::require_key(doc, "initial").get<std::string>();
    auto init_idx = sys.state_index(initial);
    if (!init_idx) throw InputError("initial state '" + initial + "' is not in the state list");
    sys.initial = *init_idx;

    auto state_of = [&](const std::string& name, const std::string& where) {
        auto idx = sys.state_index(name);
        if (!idx) throw InputError("unknown state '" + name + "' in " + where);
        return *idx;
    };
    auto output_of = [&](const std::string& name, const std::string& where) {
        for (std::size_t i = 0; i < sys.outputs.size(); ++i)
            if (sys.outputs[i] == name) return static_cast<int>(i);
        throw InputError("unknown output '" + name + "' in " + where);
    };

    const int n = sys.num_states();
    const int na = sys.num_letters();
    if (sys.kind == SystemKind::Dfa) {
        sys.accepting.assign(n, false);
        for (const auto& name : detail::string_list(detail::require_key(doc, "accepting"),
                                                    "accepting"))
            sys.accepting[state_of(name, "accepting")] = true;
        sys.dfa_next.assign(static_cast<std::size_t>(n) * na, -1);
    } else if (sys.kind == SystemKind::Mealy) {
        sys.mealy_step.assign(static_cast<std::size_t>(n) * na, {-1, -1});
    } else {
        sys.lts_succ.assign(static_cast<std::size_t>(n) * na, {});
    }

    const auto& transitions = detail::require_key(doc, "transitions");
    if (!transitions.is_object()) throw InputError("'transitions' must be an object");
    for (const auto& [state_name, row] : transitions.items()) {
        StateIndex x = state_of(state_name, "transitions");
        if (!row.is_object())
            throw InputError("transitions of '" + state_name + "' must be an object");
        for (const auto& [letter, target] : row.items()) {
            auto a = sys.alphabet.index_of(letter);
            if (!a)
                throw InputError("unknown letter '" + letter + "' in transitions of '" +
                                 state_name + "'");
            const std::string where = "transition (" + state_name + ", " + letter + ")";
            switch (sys.kind) {
                case SystemKind::Dfa:
                    sys.dfa_next[sys.at(x, *a)] = state_of(target.get<std::string>(), where);
                    break;
                case SystemKind::Mealy: {
                    if (!target.is_array() || target.size() != 2)
                        throw InputError(where + " must be a pair [output, state]");
                    sys.mealy_step[sys.at(x, *a)] = {
                        output_of(target[0].get<std::string>(), where),
                        state_of(target[1].get<std::string>(), where)};
                    break;
                }
                case SystemKind::Lts: {
                    std::set<StateIndex> ts;
                    for (const auto& name : detail::string_list(target, where))
                        ts.insert(state_of(name, where));
                    sys.lts_succ[sys.at(x, *a)].assign(ts.begin(), ts.end());
                    break;
                }
            }
        }
    }

    auto report = validate_system(sys);
    if (!report.empty()) {
        std::string msg = "system file fails validation:";
        for (const auto& v : report) msg += "\n  - " + v;
        throw InputError(msg);
    }
    return sys;
}

/// Serializes a system in the file format. parse_system(export_system(s))
/// reproduces s exactly (state and letter orders are preserved).
inline std::string export_system(const PointedSystem& sys) {
    nlohmann::ordered_json doc;
    doc["kind"] = to_string(sys.kind);
    doc["alphabet"] = sys.alphabet.letters;
    if (sys.kind == SystemKind::Mealy) doc["outputs"] = sys.outputs;
    doc["states"] = sys.state_names;
    doc["initial"] = sys.state_names[sys.initial];
    if (sys.kind == SystemKind::Dfa) {
        auto acc = nlohmann::ordered_json::array();
        for (int x = 0; x < sys.num_states(); ++x)
            if (sys.accepting[x]) acc.push_back(sys.state_names[x]);
        doc["accepting"] = acc;
    }
    auto transitions = nlohmann::ordered_json::object();
    for (StateIndex x = 0; x < sys.num_states(); ++x) {
        auto row = nlohmann::ordered_json::object();
        for (LetterIndex a = 0; a < sys.num_letters(); ++a) {
            const std::string& letter = sys.alphabet.letters[a];
            switch (sys.kind) {
                case SystemKind::Dfa:
                    row[letter] = sys.state_names[sys.dfa_next[sys.at(x, a)]];
                    break;
                case SystemKind::Mealy: {
                    auto [o, t] = sys.mealy_step[sys.at(x, a)];
                    row[letter] = {sys.outputs[o], sys.state_names[t]};
                    break;
                }
                case SystemKind::Lts: {
                    auto ts = nlohmann::ordered_json::array();
                    for (StateIndex t : sys.lts_succ[sys.at(x, a)])
                        ts.push_back(sys.state_names[t]);
                    if (!ts.empty()) row[letter] = ts;
                    break;
                }
            }
        }
        transitions[sys.state_names[x]] = row;
    }
    doc["transitions"] = transitions;
    return doc.dump(2) + "\n";
}

/// Deterministic DOT rendering: one node per state, initial marked with an
/// incoming arrow, DFA accepting states double-circled, edges labelled by
/// letter (Mealy: "letter/output").
inline std::string export_dot(const PointedSystem& sys) {
    std::string out = "digraph system {\n  rankdir=LR;\n  __init [shape=point];\n";
    for (StateIndex x = 0; x < sys.num_states(); ++x) {
        out += "  \"" + sys.state_names[x] + "\" [shape=";
        out += (sys.kind == SystemKind::Dfa && sys.accepting[x]) ? "doublecircle" : "circle";
        out += "];\n";
    }
    out += "  __init -> \"" + sys.state_names[sys.initial] + "\";\n";
    for (StateIndex x = 0; x < sys.num_states(); ++x)
        for (LetterIndex a = 0; a < sys.num_letters(); ++a) {
            const std::string& from = sys.state_names[x];
            const std::string& letter = sys.alphabet.letters[a];
            switch (sys.kind) {
                case SystemKind::Dfa:
                    out += "  \"" + from + "\" -> \"" + sys.state_names[sys.dfa_next[sys.at(x, a)]] +
                           "\" [label=\"" + letter + "\"];\n";
                    break;
                case SystemKind::Mealy: {
                    auto [o, t] = sys.mealy_step[sys.at(x, a)];
                    out += "  \"" + from + "\" -> \"" + sys.state_names[t] + "\" [label=\"" +
                           letter + "/" + sys.outputs[o] + "\"];\n";
                    break;
                }
                case SystemKind::Lts:
                    for (StateIndex t : sys.lts_succ[sys.at(x, a)])
                        out += "  \"" + from + "\" -> \"" + sys.state_names[t] + "\" [label=\"" +
                               letter + "\"];\n";
                    break;
            }
        }
    out += "}\n";
    return out;
}

}  // namespace coalearn
