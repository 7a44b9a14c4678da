#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "alpp/bdd.hpp"
#include "alpp/bench.hpp"
#include "alpp/engine.hpp"
#include "alpp/oracle.hpp"
#include "alpp/parser.hpp"
#include "alpp/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoAnswer = 1;
constexpr int kExitResource = 2;
constexpr int kExitInput = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open program file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunFlags {
  std::string program_path;
  std::string program_text;  // --bench fills this instead of a file
  std::string goal_text;
  bool json = false;
  bool list_explanations = false;
  bool no_factoring = false;
  bool oracle = false;
  std::string dump_bdd;
  int precision = 6;
  int parallel = 1;
  alpp::SearchLimits limits;
  std::size_t oracle_instances = 20;
};

int do_run(const RunFlags& flags, bool count_only) {
  using namespace alpp;
  Program program;
  Goal goal;
  try {
    std::string text =
        flags.program_text.empty() ? read_file(flags.program_path) : flags.program_text;
    program = parse_program(text);
    goal = parse_goal(flags.goal_text, program);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  EngineOptions opts;
  opts.limits = flags.limits;
  opts.factoring = !flags.no_factoring;
  opts.threads = flags.parallel;

  DeriveResult result;
  auto t0 = std::chrono::steady_clock::now();
  try {
    result = derive(program, goal, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  auto t1 = std::chrono::steady_clock::now();

  if (count_only) {
    if (!result.complete()) {
      std::cerr << "error: resource limit (" << status_string(result.status) << ")\n";
      return kExitResource;
    }
    std::cout << result.leaves.size() << "\n";
    return kExitOk;
  }

  QueryReport report = build_report(program, goal, flags.goal_text, result);
  report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

  if (!flags.dump_bdd.empty()) {
    Collected collected = collect(result.leaves, goal);
    BddManager manager;
    CompiledFormula cf = compile_explanations(collected.explanations, program.pic_probs(), manager);
    std::ofstream out(flags.dump_bdd);
    out << manager.to_dot(cf.root, cf.vars);
  }

  if (flags.json)
    std::cout << report_to_json(report, flags.precision);
  else
    std::cout << report_to_text(report, flags.precision, flags.list_explanations);

  if (flags.oracle) {
    try {
      OracleOptions oopts;
      oopts.max_instances = flags.oracle_instances;
      double oracle_p = oracle_probability(program, goal, oopts);
      OracleUniverse universe = build_universe(program, goal, oopts.max_instances);
      double engine_p = ground_expanded_probability(result.leaves, program, goal, universe);
      std::cerr << "oracle: P = " << format_probability(oracle_p, 9)
                << ", engine (ground-expanded): P = " << format_probability(engine_p, 9)
                << ", |diff| = " << format_probability(std::abs(oracle_p - engine_p), 9) << "\n";
    } catch (const std::exception& e) {
      std::cerr << "oracle: skipped (" << e.what() << ")\n";
    }
  }

  if (!result.complete()) return kExitResource;
  if (result.leaves.empty()) return kExitNoAnswer;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abductive reasoning over logic programs with probabilistic integrity constraints"};
  app.require_subcommand(1);

  RunFlags flags;
  int bench_n = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--program", flags.program_path, "program file (.alp)");
    cmd->add_option("--bench", bench_n, "use the generated chain family of this size instead")
        ->check(CLI::Range(1, 20));
    cmd->add_option("--goal", flags.goal_text, "goal literals, comma separated");
    cmd->add_option("--max-depth", flags.limits.max_depth, "per-branch transition limit");
    cmd->add_option("--max-nodes", flags.limits.max_nodes, "global node budget");
    cmd->add_option("--max-leaves", flags.limits.max_leaves, "cap on success leaves");
    cmd->add_flag("--no-factoring", flags.no_factoring, "disable the factoring transition");
    cmd->add_option("--parallel", flags.parallel, "worker threads for branch-parallel search");
  };

  CLI::App* run = app.add_subcommand("run", "solve a goal and report answers and probabilities");
  add_common(run);
  run->add_flag("--json", flags.json, "JSON report on stdout");
  run->add_flag("--list-explanations", flags.list_explanations,
                "include every explanation in the text report");
  run->add_flag("--oracle", flags.oracle,
                "cross-check against brute-force world enumeration (stderr)");
  run->add_option("--dump-bdd", flags.dump_bdd, "write the compiled BDD as DOT to this file");
  run->add_option("--precision", flags.precision, "printed decimals (default 6)")
      ->check(CLI::Range(0, 17));
  run->add_option("--oracle-instances", flags.oracle_instances,
                  "instance cap for --oracle (default 20)");

  CLI::App* count = app.add_subcommand("count-worlds", "print the number of worlds found");
  add_common(count);

  CLI::App* gen = app.add_subcommand("gen-bench", "emit a chain-family benchmark program");
  int gen_n = 1;
  std::string gen_out;
  gen->add_option("n", gen_n, "family size (1..20)")->required()->check(CLI::Range(1, 20));
  gen->add_option("--output", gen_out, "write to file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      std::string text = alpp::gen_bench(gen_n);
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(gen_out);
        out << text;
      }
      return kExitOk;
    }
    if (bench_n > 0) {
      flags.program_text = alpp::gen_bench(bench_n);
      if (flags.goal_text.empty()) flags.goal_text = "b0(X)";
    }
    if (flags.goal_text.empty()) {
      std::cerr << "error: --goal is required\n";
      return kExitInput;
    }
    if (flags.program_path.empty() && flags.program_text.empty()) {
      std::cerr << "error: --program or --bench is required\n";
      return kExitInput;
    }
    return do_run(flags, count->parsed());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
