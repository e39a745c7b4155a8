// Tests for the three logics: words for automata, non-empty words for
// Mealy machines, modal formulas for transition systems. Includes closure
// operations, evaluation and theory rows.

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "coalearn/system.hpp"

namespace coalearn {

// ---------------------------------------------------------------------------
// Modal formulas

enum class Conn { Top, Bot, Not, Or, And, Diamond };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable formula node. `size` (node count) and the canonical rendering
/// are precomputed; ordering and equality go through them.
struct Formula {
    Conn conn;
    std::string action;  // Diamond only
    FormulaPtr lhs;      // Not/Diamond operand, Or/And left
    FormulaPtr rhs;      // Or/And right
    int size = 1;
    std::string text;
};

namespace detail {

inline FormulaPtr make_formula(Conn c, std::string action, FormulaPtr l, FormulaPtr r) {
    auto f = std::make_shared<Formula>();
    f->conn = c;
    f->action = std::move(action);
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    switch (c) {
        case Conn::Top: f->text = "T"; break;
        case Conn::Bot: f->text = "F"; break;
        case Conn::Not:
            f->size = 1 + f->lhs->size;
            f->text = "~" + f->lhs->text;
            break;
        case Conn::Or:
        case Conn::And:
            f->size = 1 + f->lhs->size + f->rhs->size;
            f->text = "(" + f->lhs->text + (c == Conn::Or ? "|" : "&") + f->rhs->text + ")";
            break;
        case Conn::Diamond:
            f->size = 1 + f->lhs->size;
            f->text = "<" + f->action + ">" + f->lhs->text;
            break;
    }
    return f;
}

}  // namespace detail

inline FormulaPtr f_top() {
    static FormulaPtr t = detail::make_formula(Conn::Top, "", nullptr, nullptr);
    return t;
}
inline FormulaPtr f_bot() {
    static FormulaPtr b = detail::make_formula(Conn::Bot, "", nullptr, nullptr);
    return b;
}
inline FormulaPtr f_not(FormulaPtr p) {
    return detail::make_formula(Conn::Not, "", std::move(p), nullptr);
}
inline FormulaPtr f_or(FormulaPtr p, FormulaPtr q) {
    return detail::make_formula(Conn::Or, "", std::move(p), std::move(q));
}
inline FormulaPtr f_and(FormulaPtr p, FormulaPtr q) {
    return detail::make_formula(Conn::And, "", std::move(p), std::move(q));
}
inline FormulaPtr f_diamond(std::string action, FormulaPtr p) {
    return detail::make_formula(Conn::Diamond, std::move(action), std::move(p), nullptr);
}

/// Canonical order: syntactic size first, rendering as tie-break.
inline bool formula_less(const FormulaPtr& a, const FormulaPtr& b) {
    if (a->size != b->size) return a->size < b->size;
    return a->text < b->text;
}
inline bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    return a->text == b->text;
}

/// Parses the textual syntax `T`, `F`, `~p`, `(p|q)`, `(p&q)`, `<a>p`.
inline FormulaPtr parse_formula(std::string_view text) {
    struct Parser {
        std::string_view s;
        std::size_t pos = 0;

        [[noreturn]] void fail(const std::string& what) {
            throw InputError("formula parse error at position " + std::to_string(pos) + ": " +
                             what);
        }
        char peek() {
            if (pos >= s.size()) fail("unexpected end of input");
            return s[pos];
        }
        void expect(char c) {
            if (peek() != c) fail(std::string("expected '") + c + "'");
            ++pos;
        }
        FormulaPtr formula() {
            switch (peek()) {
                case 'T': ++pos; return f_top();
                case 'F': ++pos; return f_bot();
                case '~': ++pos; return f_not(formula());
                case '<': {
                    ++pos;
                    std::string action;
                    while (peek() != '>') action += s[pos++];
                    if (action.empty()) fail("empty action");
                    ++pos;
                    return f_diamond(action, formula());
                }
                case '(': {
                    ++pos;
                    FormulaPtr l = formula();
                    char op = peek();
                    if (op != '|' && op != '&') fail("expected '|' or '&'");
                    ++pos;
                    FormulaPtr r = formula();
                    expect(')');
                    return op == '|' ? f_or(l, r) : f_and(l, r);
                }
                default: fail("unexpected character");
            }
        }
    } p{text};
    FormulaPtr f = p.formula();
    if (p.pos != text.size()) p.fail("trailing input");
    return f;
}

// ---------------------------------------------------------------------------
// Tests and suites

/// A single logical test. Word tests carry a `word` (letter indices), modal
/// tests carry a `formula`; `kind` selects which.
struct Test {
    SystemKind kind = SystemKind::Dfa;
    Word word;
    FormulaPtr formula;

    static Test of_word(SystemKind k, Word w) { return Test{k, std::move(w), nullptr}; }
    static Test of_formula(FormulaPtr f) { return Test{SystemKind::Lts, {}, std::move(f)}; }
};

inline bool shortlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

inline bool test_less(const Test& a, const Test& b) {
    if (a.kind == SystemKind::Lts) return formula_less(a.formula, b.formula);
    return shortlex_less(a.word, b.word);
}
inline bool test_equal(const Test& a, const Test& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == SystemKind::Lts) return formula_equal(a.formula, b.formula);
    return a.word == b.word;
}

/// Renders a test for traces and the CLI. Words come out as bare strings
/// (the empty word as ""), formulas in the textual syntax.
inline std::string format_test(const Test& t, const Alphabet& alphabet) {
    if (t.kind == SystemKind::Lts) return t.formula->text;
    std::string out;
    for (LetterIndex a : t.word) out += alphabet.letters[a];
    return out;
}

/// Parses a bare word, matching letters greedily (longest letter first).
inline Word parse_word(std::string_view text, const Alphabet& alphabet) {
    Word w;
    std::size_t pos = 0;
    while (pos < text.size()) {
        int best = -1;
        std::size_t best_len = 0;
        for (int i = 0; i < alphabet.size(); ++i) {
            const auto& l = alphabet.letters[i];
            if (l.size() > best_len && text.substr(pos, l.size()) == l) {
                best = i;
                best_len = l.size();
            }
        }
        if (best < 0)
            throw InputError("word contains a symbol outside the alphabet: '" +
                             std::string(text.substr(pos)) + "'");
        w.push_back(best);
        pos += best_len;
    }
    return w;
}

/// A closure-closed, canonically ordered set of tests of one variant.
struct TestSuite {
    SystemKind kind = SystemKind::Dfa;
    std::vector<Test> tests;

    int size() const { return static_cast<int>(tests.size()); }
    bool contains(const Test& t) const {
        return std::any_of(tests.begin(), tests.end(),
                           [&](const Test& u) { return test_equal(u, t); });
    }
};

namespace detail {

inline void check_word_letters(const Word& w, const Alphabet& alphabet) {
    for (LetterIndex a : w)
        if (a < 0 || a >= alphabet.size())
            throw InputError("word contains a letter outside the alphabet");
}

inline void check_formula_actions(const FormulaPtr& f, const Alphabet& alphabet) {
    if (!f) return;
    if (f->conn == Conn::Diamond && !alphabet.index_of(f->action))
        throw InputError("formula uses unknown action '" + f->action + "'");
    check_formula_actions(f->lhs, alphabet);
    check_formula_actions(f->rhs, alphabet);
}

}  // namespace detail

/// Smallest suffix-closed superset, in shortlex order. For Mealy suites the
/// empty word is dropped (tests are non-empty words).
inline TestSuite suffix_closure(SystemKind kind, const std::vector<Word>& words,
                                const Alphabet& alphabet) {
    if (kind == SystemKind::Lts) throw InputError("suffix closure applies to word tests only");
    std::set<Word> closed;
    for (const Word& w : words) {
        detail::check_word_letters(w, alphabet);
        for (std::size_t i = 0; i <= w.size(); ++i) closed.emplace(w.begin() + i, w.end());
    }
    if (kind == SystemKind::Mealy) closed.erase(Word{});
    TestSuite suite;
    suite.kind = kind;
    for (const Word& w : closed) suite.tests.push_back(Test::of_word(kind, w));
    std::sort(suite.tests.begin(), suite.tests.end(), test_less);
    return suite;
}

/// Smallest superset closed under immediate subformulas, ordered by size
/// then structurally.
inline TestSuite subformula_closure(const std::vector<FormulaPtr>& formulas,
                                    const Alphabet& alphabet) {
    std::map<std::string, FormulaPtr> closed;
    std::vector<FormulaPtr> stack(formulas.begin(), formulas.end());
    while (!stack.empty()) {
        FormulaPtr f = stack.back();
        stack.pop_back();
        detail::check_formula_actions(f, alphabet);
        if (!closed.emplace(f->text, f).second) continue;
        if (f->lhs) stack.push_back(f->lhs);
        if (f->rhs) stack.push_back(f->rhs);
    }
    TestSuite suite;
    suite.kind = SystemKind::Lts;
    for (auto& [_, f] : closed) suite.tests.push_back(Test::of_formula(f));
    std::sort(suite.tests.begin(), suite.tests.end(),
              [](const Test& a, const Test& b) { return formula_less(a.formula, b.formula); });
    return suite;
}

/// Closure of a single test: suffix closure for words, subformula closure
/// for formulas.
inline TestSuite test_closure(const Test& t, const Alphabet& alphabet) {
    if (t.kind == SystemKind::Lts) return subformula_closure({t.formula}, alphabet);
    return suffix_closure(t.kind, {t.word}, alphabet);
}

/// Union of two suites of the same variant (closure is preserved).
inline TestSuite suite_union(const TestSuite& a, const TestSuite& b) {
    if (a.kind != b.kind) throw InputError("cannot merge suites of different variants");
    TestSuite out = a;
    for (const Test& t : b.tests)
        if (!out.contains(t)) out.tests.push_back(t);
    std::sort(out.tests.begin(), out.tests.end(), test_less);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

using TruthValue = int;  // 0/1 for DFA and LTS, output index for Mealy
using Row = std::vector<TruthValue>;

namespace detail {

inline bool eval_formula(const PointedSystem& sys, StateIndex x, const Formula& f) {
    switch (f.conn) {
        case Conn::Top: return true;
        case Conn::Bot: return false;
        case Conn::Not: return !eval_formula(sys, x, *f.lhs);
        case Conn::Or: return eval_formula(sys, x, *f.lhs) || eval_formula(sys, x, *f.rhs);
        case Conn::And: return eval_formula(sys, x, *f.lhs) && eval_formula(sys, x, *f.rhs);
        case Conn::Diamond: {
            auto a = sys.alphabet.index_of(f.action);
            if (!a) throw InputError("formula uses unknown action '" + f.action + "'");
            for (StateIndex y : sys.lts_succ[sys.at(x, *a)])
                if (eval_formula(sys, y, *f.lhs)) return true;
            return false;
        }
    }
    return false;
}

}  // namespace detail

/// Evaluates a test at a state: language membership for DFAs, last-step
/// output for Mealy machines, Hennessy-Milner semantics for LTSs.
inline TruthValue eval_test(const PointedSystem& sys, StateIndex x, const Test& t) {
    if (!detail::valid_state(sys, x)) throw InputError("unknown state in test evaluation");
    if (t.kind != sys.kind) throw InputError("test variant does not match system kind");
    switch (sys.kind) {
        case SystemKind::Dfa: {
            detail::check_word_letters(t.word, sys.alphabet);
            StateIndex cur = x;
            for (LetterIndex a : t.word) cur = sys.dfa_next[sys.at(cur, a)];
            return sys.accepting[cur] ? 1 : 0;
        }
        case SystemKind::Mealy: {
            detail::check_word_letters(t.word, sys.alphabet);
            if (t.word.empty()) throw InputError("Mealy tests must be non-empty words");
            StateIndex cur = x;
            int out = 0;
            for (LetterIndex a : t.word) {
                auto [o, next] = sys.mealy_step[sys.at(cur, a)];
                out = o;
                cur = next;
            }
            return out;
        }
        case SystemKind::Lts:
            if (!t.formula) throw InputError("LTS tests must carry a formula");
            return detail::eval_formula(sys, x, *t.formula) ? 1 : 0;
    }
    return 0;
}

/// The theory row of a state: the suite evaluated pointwise, in suite order.
inline Row theory_row(const PointedSystem& sys, StateIndex x, const TestSuite& suite) {
    Row row;
    row.reserve(suite.tests.size());
    for (const Test& t : suite.tests) row.push_back(eval_test(sys, x, t));
    return row;
}

}  // namespace coalearn
