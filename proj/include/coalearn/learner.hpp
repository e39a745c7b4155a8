// Observation tables over (selected states, test suite) and the main
// learning loop: close, conjecture, equivalence query, counterexample.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "coalearn/logic.hpp"
#include "coalearn/teacher.hpp"

namespace coalearn {

/// The learner's table: selected teacher states (rows, in discovery order,
/// the initial state first) and a closure-closed test suite (columns).
/// Rows are cached theory rows, parallel to `selected`.
struct Table {
    std::vector<StateIndex> selected;
    TestSuite suite;
    std::vector<Row> rows;

    std::optional<int> find_row(const Row& r) const {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i] == r) return static_cast<int>(i);
        return std::nullopt;
    }

    /// Sharp = all rows pairwise distinct.
    bool is_sharp() const {
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j)
                if (rows[i] == rows[j]) return false;
        return true;
    }
};

/// Append-only log of one learning run, serializable to JSON lines.
struct RunTrace {
    std::vector<nlohmann::json> events;
    QueryCounters final_counters;
    int outer_iterations = 0;

    void add(nlohmann::json event) { events.push_back(std::move(event)); }

    std::string to_jsonl() const {
        std::string out;
        for (const auto& e : events) out += e.dump() + "\n";
        return out;
    }
};

struct LearnerConfig {
    bool check_invariants = false;
    int max_outer_iterations = 0;  // 0 = teacher states + 1
};

struct LearnResult {
    PointedSystem conjecture;
    std::vector<StateIndex> representatives;  // conjecture state -> teacher state
    Table table;
    RunTrace trace;
    QueryCounters counters;
};

namespace detail {

inline nlohmann::json table_snapshot(const Table& table, const Teacher& teacher) {
    nlohmann::json selected = nlohmann::json::array();
    for (StateIndex x : table.selected) selected.push_back(teacher.system().state_names[x]);
    nlohmann::json suite = nlohmann::json::array();
    for (const Test& t : table.suite.tests) suite.push_back(format_test(t, teacher.alphabet()));
    return {{"event", "table_snapshot"}, {"selected", selected}, {"suite", suite}};
}

// Candidate successors of x in (alphabet order x target ordinal) order,
// duplicates kept (the caller skips known rows anyway).
inline std::vector<StateIndex> scan_order_successors(const StateDynamics& d) {
    std::vector<StateIndex> out;
    for (StateIndex t : d.next) out.push_back(t);
    for (auto [o, t] : d.step) out.push_back(t);
    for (const auto& ts : d.succ) out.insert(out.end(), ts.begin(), ts.end());
    return out;
}

}  // namespace detail

/// Starting table: the initial state only, no tests.
inline Table init_table(Teacher& teacher) {
    Table table;
    table.suite.kind = teacher.kind();
    table.selected = {teacher.initial()};
    table.rows = {Row{}};
    return table;
}

struct ClosednessWitness {
    bool closed = true;
    StateIndex from = -1;       // selected state whose successor escapes
    StateIndex successor = -1;  // the escaping successor
};

/// A table is closed when every successor of a selected state has a row
/// equal to some selected row. The witness is the first failure in
/// (selection order x successor order).
inline ClosednessWitness is_closed(const Table& table, Teacher& teacher) {
    for (StateIndex x : table.selected) {
        const std::vector<StateIndex> succ = teacher.base_query({x}).at(x);
        for (StateIndex y : succ) {
            if (!table.find_row(teacher.row(y, table.suite)))
                return {false, x, y};
        }
    }
    return {};
}

/// Extends the table with successors until it is closed, adding one
/// representative per previously unseen row. Scan order is (selection
/// order x alphabet order x target ordinal), so the result is deterministic.
inline Table close_table(Table table, Teacher& teacher, RunTrace* trace = nullptr) {
    for (std::size_t i = 0; i < table.selected.size(); ++i) {
        StateDynamics d = teacher.dynamics(table.selected[i]);
        for (StateIndex y : detail::scan_order_successors(d)) {
            Row r = teacher.row(y, table.suite);
            if (table.find_row(r)) continue;
            table.selected.push_back(y);
            table.rows.push_back(std::move(r));
            if (trace)
                trace->add({{"event", "closing_addition"},
                            {"state", teacher.system().state_names[y]},
                            {"from", teacher.system().state_names[table.selected[i]]}});
        }
    }
    return table;
}

/// Builds the conjectured system on the table's rows: every successor of a
/// selected state is redirected to the unique selected state with the same
/// row. States are named s0..sk in discovery order.
inline PointedSystem build_conjecture(const Table& table, Teacher& teacher) {
    const PointedSystem& sys = teacher.system();
    const int k = static_cast<int>(table.selected.size());

    std::map<StateIndex, StateIndex> rep;
    std::vector<StateDynamics> dynamics(k);
    for (int i = 0; i < k; ++i) dynamics[i] = teacher.dynamics(table.selected[i]);
    for (int i = 0; i < k; ++i)
        for (StateIndex y : detail::scan_order_successors(dynamics[i])) {
            if (rep.count(y)) continue;
            auto j = table.find_row(teacher.row(y, table.suite));
            if (!j)
                throw InternalError("build_conjecture requires a closed table (successor '" +
                                    sys.state_names[y] + "' has no representative)");
            rep[y] = *j;
        }

    PointedSystem conj;
    conj.kind = sys.kind;
    conj.alphabet = sys.alphabet;
    conj.outputs = sys.outputs;
    conj.initial = 0;
    for (int i = 0; i < k; ++i) conj.state_names.push_back("s" + std::to_string(i));
    for (int i = 0; i < k; ++i) {
        StateDynamics d = retarget(sys, table.selected[i], rep);
        switch (sys.kind) {
            case SystemKind::Dfa:
                conj.accepting.push_back(d.accepting);
                conj.dfa_next.insert(conj.dfa_next.end(), d.next.begin(), d.next.end());
                break;
            case SystemKind::Mealy:
                conj.mealy_step.insert(conj.mealy_step.end(), d.step.begin(), d.step.end());
                break;
            case SystemKind::Lts:
                conj.lts_succ.insert(conj.lts_succ.end(), d.succ.begin(), d.succ.end());
                break;
        }
    }
    return conj;
}

/// Extends the suite with the closure of the counterexample and recomputes
/// all rows. A test already covered by the suite leaves the table unchanged.
inline Table add_counterexample(Table table, const Test& t, Teacher& teacher) {
    if (t.kind != table.suite.kind)
        throw InputError("counterexample variant does not match the table");
    table.suite = suite_union(table.suite, test_closure(t, teacher.alphabet()));
    table.rows.clear();
    for (StateIndex x : table.selected) table.rows.push_back(teacher.row(x, table.suite));
    return table;
}

/// Loop invariants: sharpness, preservation of the initial state, and
/// prefix-closedness of the selection. Throws on violation.
inline void assert_invariants(const Table& table, Teacher& teacher) {
    if (!table.is_sharp()) throw InternalError("invariant violation: table is not sharp");
    if (table.selected.empty() || table.selected.front() != teacher.initial())
        throw InternalError("invariant violation: initial state not preserved");
    for (std::size_t i = 1; i < table.selected.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < i && !found; ++j) {
            auto succ = successors(teacher.system(), table.selected[j]);
            found = std::binary_search(succ.begin(), succ.end(), table.selected[i]);
        }
        if (!found)
            throw InternalError("invariant violation: selection is not prefix-closed at '" +
                                teacher.system().state_names[table.selected[i]] + "'");
    }
}

/// The main loop: close the table, conjecture, ask for equivalence, fold in
/// the counterexample; repeat until the teacher accepts.
inline LearnResult learn(Teacher& teacher, const LearnerConfig& config = {}) {
    const int max_iters = config.max_outer_iterations > 0
                              ? config.max_outer_iterations
                              : teacher.system().num_states() + 1;
    Table table = init_table(teacher);
    RunTrace trace;
    trace.add(detail::table_snapshot(table, teacher));
    if (config.check_invariants) assert_invariants(table, teacher);

    for (int iter = 1; iter <= max_iters; ++iter) {
        table = close_table(std::move(table), teacher, &trace);
        trace.add(detail::table_snapshot(table, teacher));
        if (config.check_invariants) assert_invariants(table, teacher);

        PointedSystem conj = build_conjecture(table, teacher);
        nlohmann::json state_map = nlohmann::json::object();
        for (std::size_t i = 0; i < table.selected.size(); ++i)
            state_map[conj.state_names[i]] = teacher.system().state_names[table.selected[i]];
        trace.add({{"event", "conjecture_built"},
                   {"states", conj.num_states()},
                   {"state_map", state_map}});

        EquivalenceAnswer ans = teacher.equivalence_query(conj);
        trace.add({{"event", "equivalence_result"},
                   {"correct", ans.correct},
                   {"counterexample", ans.correct
                                          ? ""
                                          : format_test(ans.counterexample, teacher.alphabet())}});
        if (ans.correct) {
            trace.outer_iterations = iter;
            trace.final_counters = teacher.counters();
            trace.add({{"event", "finished"},
                       {"outer_iterations", iter},
                       {"states", conj.num_states()},
                       {"membership_queries", trace.final_counters.membership},
                       {"equivalence_queries", trace.final_counters.equivalence},
                       {"base_queries", trace.final_counters.base}});
            LearnResult result;
            result.conjecture = std::move(conj);
            result.representatives = table.selected;
            result.table = std::move(table);
            result.trace = std::move(trace);
            result.counters = teacher.counters();
            return result;
        }

        table = add_counterexample(std::move(table), ans.counterexample, teacher);
        trace.add({{"event", "counterexample_added"},
                   {"test", format_test(ans.counterexample, teacher.alphabet())}});
        trace.add(detail::table_snapshot(table, teacher));
        if (config.check_invariants) assert_invariants(table, teacher);
    }
    throw InternalError("learning exceeded the safety bound on outer iterations");
}

}  // namespace coalearn
