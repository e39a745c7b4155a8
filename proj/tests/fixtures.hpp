// Shared fixtures: the two bundled teacher systems, built programmatically
// so tests do not depend on the parser, plus file loading helpers.

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "coalearn/coalearn.hpp"

namespace fixtures {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data_path(const std::string& name) {
    return std::string(COALEARN_DATA_DIR) + "/" + name;
}

inline coalearn::PointedSystem load(const std::string& name) {
    return coalearn::parse_system(read_file(data_path(name)));
}

// Finite surrogate of the mod-3 a-counter: q0..q8, accepting iff index
// divisible by 3, a steps forward (q8 wraps to q0), b self-loops.
inline coalearn::PointedSystem mod3_dfa() {
    coalearn::PointedSystem sys;
    sys.kind = coalearn::SystemKind::Dfa;
    sys.alphabet.letters = {"a", "b"};
    for (int i = 0; i < 9; ++i) {
        sys.state_names.push_back("q" + std::to_string(i));
        sys.accepting.push_back(i % 3 == 0);
        sys.dfa_next.push_back((i + 1) % 9);  // a
        sys.dfa_next.push_back(i);            // b
    }
    sys.initial = 0;
    return sys;
}

// The nine-state transition system with the infinite b-chain truncated by a
// self-loop at x8; bisimilar to the original.
inline coalearn::PointedSystem paper_lts() {
    coalearn::PointedSystem sys;
    sys.kind = coalearn::SystemKind::Lts;
    sys.alphabet.letters = {"a", "b"};
    for (int i = 0; i < 9; ++i) sys.state_names.push_back("x" + std::to_string(i));
    sys.initial = 0;
    sys.lts_succ.assign(9 * 2, {});
    auto add = [&](int x, int a, std::vector<coalearn::StateIndex> ts) {
        sys.lts_succ[sys.at(x, a)] = std::move(ts);
    };
    add(0, 0, {1, 2});
    add(1, 0, {0, 4});
    add(1, 1, {3});
    add(2, 0, {0, 6});
    add(2, 1, {5});
    add(4, 1, {4});
    add(6, 1, {7});
    add(7, 1, {8});
    add(8, 1, {8});
    return sys;
}

// The minimal system for the paper_lts root: states x0, x1, x3, x4.
inline coalearn::PointedSystem paper_lts_minimal() {
    coalearn::PointedSystem sys;
    sys.kind = coalearn::SystemKind::Lts;
    sys.alphabet.letters = {"a", "b"};
    sys.state_names = {"x0", "x1", "x3", "x4"};
    sys.initial = 0;
    sys.lts_succ.assign(4 * 2, {});
    sys.lts_succ[sys.at(0, 0)] = {1};
    sys.lts_succ[sys.at(1, 0)] = {0, 3};
    sys.lts_succ[sys.at(1, 1)] = {2};
    sys.lts_succ[sys.at(3, 1)] = {3};
    return sys;
}

// The three-state mod-3 automaton: an a-cycle with b self-loops, q0 accepting.
inline coalearn::PointedSystem mod3_minimal() {
    coalearn::PointedSystem sys;
    sys.kind = coalearn::SystemKind::Dfa;
    sys.alphabet.letters = {"a", "b"};
    for (int i = 0; i < 3; ++i) {
        sys.state_names.push_back("q" + std::to_string(i));
        sys.accepting.push_back(i == 0);
        sys.dfa_next.push_back((i + 1) % 3);
        sys.dfa_next.push_back(i);
    }
    sys.initial = 0;
    return sys;
}

// One state, accepting, with self-loops on every letter.
inline coalearn::PointedSystem one_state_all_accepting() {
    coalearn::PointedSystem sys;
    sys.kind = coalearn::SystemKind::Dfa;
    sys.alphabet.letters = {"a", "b"};
    sys.state_names = {"c0"};
    sys.accepting = {true};
    sys.dfa_next = {0, 0};
    sys.initial = 0;
    return sys;
}

// One state with an a self-loop and no b transitions.
inline coalearn::PointedSystem one_state_a_loop_lts() {
    coalearn::PointedSystem sys;
    sys.kind = coalearn::SystemKind::Lts;
    sys.alphabet.letters = {"a", "b"};
    sys.state_names = {"c0"};
    sys.initial = 0;
    sys.lts_succ = {{0}, {}};
    return sys;
}

}  // namespace fixtures
