// Command-line front end: learn, minimize, equiv, eval.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "coalearn/coalearn.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw coalearn::InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw coalearn::InputError("cannot write '" + path + "'");
    out << content;
}

int run(int argc, char** argv) {
    CLI::App app{"Active learning of minimal state-based systems from a teacher"};
    app.require_subcommand(1);

    // learn
    std::string teacher_path, output_path, dot_path, trace_path;
    bool check_invariants = false;
    int max_outer = 0;
    auto* learn_cmd = app.add_subcommand("learn", "Learn a minimal system from a teacher file");
    learn_cmd->add_option("--teacher", teacher_path, "teacher system file")->required();
    learn_cmd->add_option("--output", output_path, "write the learned system here");
    learn_cmd->add_option("--dot", dot_path, "write a DOT rendering of the learned system");
    learn_cmd->add_option("--trace", trace_path, "write the run trace (JSON lines)");
    learn_cmd->add_flag("--check-invariants", check_invariants,
                        "assert table invariants after every step");
    learn_cmd->add_option("--max-outer-iterations", max_outer, "safety bound override");

    // minimize
    std::string min_input, min_output, min_dot;
    auto* min_cmd = app.add_subcommand("minimize",
                                       "Minimize the reachable part of a system file");
    min_cmd->add_option("--input", min_input, "system file")->required();
    min_cmd->add_option("--output", min_output, "write the minimized system here");
    min_cmd->add_option("--dot", min_dot, "write a DOT rendering of the minimized system");

    // equiv
    std::string equiv_left, equiv_right;
    auto* equiv_cmd = app.add_subcommand("equiv", "Compare two system files");
    equiv_cmd->add_option("left", equiv_left, "first system file")->required();
    equiv_cmd->add_option("right", equiv_right, "second system file")->required();

    // eval
    std::string eval_path, eval_state, eval_test_text;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a test at a state");
    eval_cmd->add_option("--teacher", eval_path, "system file")->required();
    eval_cmd->add_option("--state", eval_state, "state name")->required();
    eval_cmd->add_option("--test", eval_test_text,
                         "word, or formula (T, F, ~p, (p|q), (p&q), <a>p)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    using namespace coalearn;

    if (learn_cmd->parsed()) {
        Teacher teacher(parse_system(read_file(teacher_path)));
        LearnerConfig config;
        config.check_invariants = check_invariants;
        config.max_outer_iterations = max_outer;
        LearnResult result = learn(teacher, config);
        if (!output_path.empty()) write_file(output_path, export_system(result.conjecture));
        if (!dot_path.empty()) write_file(dot_path, export_dot(result.conjecture));
        if (!trace_path.empty()) write_file(trace_path, result.trace.to_jsonl());
        std::cout << "states: " << result.conjecture.num_states() << "\n"
                  << "outer_iterations: " << result.trace.outer_iterations << "\n"
                  << "membership_queries: " << result.counters.membership << "\n"
                  << "equivalence_queries: " << result.counters.equivalence << "\n"
                  << "base_queries: " << result.counters.base << "\n";
        return 0;
    }

    if (min_cmd->parsed()) {
        PointedSystem sys = parse_system(read_file(min_input));
        Quotient q = logical_quotient(sys);
        if (!min_output.empty()) write_file(min_output, export_system(q.minimized));
        if (!min_dot.empty()) write_file(min_dot, export_dot(q.minimized));
        std::cout << "states: " << sys.num_states() << "\n"
                  << "minimized_states: " << q.minimized.num_states() << "\n";
        if (min_output.empty() && min_dot.empty()) std::cout << export_system(q.minimized);
        return 0;
    }

    if (equiv_cmd->parsed()) {
        Teacher left(parse_system(read_file(equiv_left)));
        PointedSystem right = parse_system(read_file(equiv_right));
        EquivalenceAnswer ans = left.equivalence_query(right);
        if (ans.correct) {
            std::cout << "CORRECT\n";
        } else {
            std::cout << "counterexample: " << format_test(ans.counterexample, left.alphabet())
                      << "\n";
        }
        return 0;
    }

    // eval
    PointedSystem sys = parse_system(read_file(eval_path));
    auto state = sys.state_index(eval_state);
    if (!state) throw InputError("unknown state '" + eval_state + "'");
    Test test = sys.kind == SystemKind::Lts
                    ? Test::of_formula(parse_formula(eval_test_text))
                    : Test::of_word(sys.kind, parse_word(eval_test_text, sys.alphabet));
    TruthValue v = eval_test(sys, *state, test);
    if (sys.kind == SystemKind::Mealy)
        std::cout << sys.outputs[v] << "\n";
    else
        std::cout << (v ? "true" : "false") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const coalearn::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const coalearn::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
