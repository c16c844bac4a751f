#include "kex/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kex/approx3.hpp"
#include "kex/colorcoding.hpp"
#include "kex/errors.hpp"
#include "kex/io.hpp"
#include "kex/kernel.hpp"
#include "kex/oracle.hpp"
#include "kex/twsolver.hpp"
#include "kex/typesolver.hpp"

namespace kex {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ParseError("cannot write " + path);
  file << text;
}

struct SolveArgs {
  std::string input, output, algorithm, td_file;
  bool kernelize = false;
  bool exhaustive = false;
  std::optional<std::uint64_t> trials;
  std::uint64_t seed = 0;
  std::optional<std::size_t> cap;
  std::string packing = "exact";
  int swap = 2;
};

SolveResult dispatch(const Instance& inst, const SolveArgs& a) {
  if (a.algorithm == "brute")
    return oracle::solve_exact(inst, a.cap.value_or(oracle::kDefaultUnitCap));
  if (a.algorithm == "color") {
    colorcoding::Options o;
    o.trials = a.trials;
    o.seed = a.seed;
    o.exhaustive = a.exhaustive;
    if (a.cap) o.table_cap = *a.cap;
    return colorcoding::solve_colorcoding(inst, o);
  }
  if (a.algorithm == "types")
    return types::solve_types(inst, a.cap.value_or(types::kDefaultSignatureCap));
  if (a.algorithm == "tw") {
    tw::Options o;
    if (a.cap) o.table_cap = *a.cap;
    if (!a.td_file.empty()) {
      o.decomposition = tw::parse_decomposition(read_file(a.td_file));
      std::string why;
      if (!tw::is_valid(*o.decomposition, underlying_undirected(inst.graph), &why))
        throw ModelError("decomposition " + a.td_file + ": " + why);
    }
    return tw::solve_tw(inst, o);
  }
  approx::PackingOptions o;
  o.mode = a.packing == "local" ? approx::PackingMode::local_search
                                : approx::PackingMode::exact;
  o.swap_width = a.swap;
  if (a.cap) o.family_cap = *a.cap;
  return approx::solve_approx3(inst, o);
}

int solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = io::parse_instance(read_file(a.input));
  if (a.kernelize && !a.td_file.empty())
    throw ModelError("--td refers to original ids and cannot be combined with --kernelize");

  SolveResult result;
  if (a.kernelize) {
    auto [kernel, report] = kernel::kernelize(inst);
    if (report.shortcut) {
      result.algorithm = a.algorithm;
      result.feasible = true;
      result.value = exchange_value(*report.shortcut);
      result.exchange = *report.shortcut;
      result.exchange->normalize();
      result.stats["kernel_shortcut"] = 1;
    } else {
      result = dispatch(kernel, a);
      if (result.exchange) {
        result.exchange = lift_exchange(*result.exchange, report.kept);
        result.exchange->normalize();
      }
    }
    result.stats["kernel_vertices"] = static_cast<double>(report.kept.size());
    result.stats["removed_vertices"] = static_cast<double>(report.removed.size());
  } else {
    result = dispatch(inst, a);
  }
  if (result.exchange && !validate_exchange(inst, *result.exchange).ok())
    throw InternalError("solver returned an invalid exchange");
  emit(io::write_result(result), a.output, out);
  (void)err;
  return result.feasible ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"kex: kidney-exchange clearing solver"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("-i,--input", sa.input, "Instance JSON")->required();
  solve_cmd->add_option("-a,--algorithm", sa.algorithm, "Solver")
      ->required()
      ->check(CLI::IsMember({"brute", "color", "types", "tw", "approx3"}));
  solve_cmd->add_option("-o,--output", sa.output, "Result JSON (default stdout)");
  solve_cmd->add_flag("--kernelize", sa.kernelize, "Reduce the instance first");
  solve_cmd->add_option("--trials", sa.trials, "Color-coding trials");
  solve_cmd->add_option("--seed", sa.seed, "Random seed");
  solve_cmd->add_flag("--exhaustive", sa.exhaustive,
                      "Color coding over every coloring (small n)");
  solve_cmd->add_option("--cap", sa.cap, "Capacity limit for enumeration/tables");
  solve_cmd->add_option("--td", sa.td_file, "Tree decomposition JSON for -a tw");
  solve_cmd->add_option("--packing", sa.packing, "Set packing for -a approx3")
      ->check(CLI::IsMember({"exact", "local"}));
  solve_cmd->add_option("--swap", sa.swap, "Local-search swap width")
      ->check(CLI::NonNegativeNumber);

  std::string k_in, k_out;
  auto* kernel_cmd = app.add_subcommand("kernelize", "Write the reduced instance");
  kernel_cmd->add_option("-i,--input", k_in)->required();
  kernel_cmd->add_option("-o,--output", k_out);

  std::string c_in, c_sol;
  auto* check_cmd = app.add_subcommand("check", "Validate a solution document");
  check_cmd->add_option("-i,--input", c_in)->required();
  check_cmd->add_option("-s,--solution", c_sol)->required();

  int g_n = 0, g_b = 0, g_lp = 0, g_lc = 0, g_t = 0;
  std::uint64_t g_m = 0, g_seed = 0;
  std::string g_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--n", g_n)->required()->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--m", g_m)->required();
  gen_cmd->add_option("--b", g_b)->default_val(0)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--lp", g_lp)->default_val(0)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--lc", g_lc)->default_val(0)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--t", g_t)->default_val(0)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", g_seed)->default_val(0);
  gen_cmd->add_option("-o,--output", g_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*solve_cmd) return solve(sa, out, err);
    if (*kernel_cmd) {
      const Instance inst = io::parse_instance(read_file(k_in));
      auto [kernel, report] = kernel::kernelize(inst);
      emit(io::write_instance(kernel), k_out, out);
      err << "kept " << report.kept.size() << " of "
          << inst.graph.num_vertices() << " vertices";
      if (report.shortcut)
        err << "; greedy cover already reaches t ("
            << exchange_value(*report.shortcut) << ")";
      err << "\n";
      return 0;
    }
    if (*check_cmd) {
      const Instance inst = io::parse_instance(read_file(c_in));
      const io::SolutionDocument sol = io::parse_solution(read_file(c_sol));
      const io::CheckReport report = io::check_solution(inst, sol);
      if (report.ok()) {
        out << "ok\n";
        return 0;
      }
      for (const auto& v : report.validation.violations)
        out << v.unit << ": " << v.rule << "\n";
      for (const auto& p : report.problems) out << p << "\n";
      return 1;
    }
    if (*gen_cmd) {
      const Instance inst(io::gen_random(g_n, g_m, g_b, g_seed), g_lp, g_lc, g_t);
      emit(io::write_instance(inst), g_out, out);
      return 0;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return 3;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}

}  // namespace kex
