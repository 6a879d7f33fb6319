#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>

#include "dcproof/checker.hpp"
#include "dcproof/harness.hpp"
#include "dcproof/io.hpp"
#include "dcproof/parallel.hpp"
#include "dcproof/stitcher.hpp"
#include "dcproof/trimmer.hpp"

namespace dcproof::cli {
namespace {

namespace fs = std::filesystem;

std::string ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct StitchArgs {
  std::string cnf;
  std::string proofs;
  std::string icnf;
  std::string manifest;
  int cl_avg = 10;
  unsigned jobs = 0;
  std::string output;
  bool strict = false;
  bool permissive = false;
  bool no_verify = false;
  bool strip_deletions = false;
  std::string spill_dir;
  bool skip_precheck = false;
};

struct CheckArgs {
  std::string cnf;
  std::string drat;
  bool strict = false;
  bool permissive = false;
};

struct TrimArgs {
  std::string cnf;
  std::string drat;
  std::string output;
  std::string core;
  bool no_resynthesis = false;
  bool permissive = false;
};

struct FixtureArgs {
  int vars = 16;
  double ratio = 4.26;
  std::size_t depth = 2;
  std::uint64_t seed = 1;
  std::string output;
};

struct SolveArgs {
  std::string cnf;
  std::uint64_t seed = 0;
  std::uint64_t max_conflicts = 0;
  std::string proof;
};

struct SplitArgs {
  std::string cnf;
  std::size_t depth = 1;
  std::string output;
};

void print_check(std::ostream& out, const CheckReport& r) {
  out << "verdict=" << to_string(r.verdict) << "\n";
  if (!r.valid()) {
    out << "reason=" << to_string(r.reason) << "\n";
    if (r.failing_step) out << "failing_step=" << *r.failing_step << "\n";
  }
  out << "steps_checked=" << r.stats.steps_checked << "\n"
      << "additions=" << r.stats.additions << "\n"
      << "deletions=" << r.stats.deletions << "\n"
      << "at_steps=" << r.stats.at_steps << "\n"
      << "rat_steps=" << r.stats.rat_steps << "\n";
  if (!r.skipped_deletions.empty()) {
    out << "skipped_deletions=" << r.skipped_deletions.size() << "\n";
  }
}

void print_trim(std::ostream& out, const TrimReport& r) {
  out << "input_steps=" << r.input_steps << "\n"
      << "output_steps=" << r.output_steps << "\n"
      << "input_bytes=" << r.input_bytes << "\n"
      << "output_bytes=" << r.output_bytes << "\n"
      << "core_clauses=" << r.core_clauses << "\n"
      << "passes=" << r.passes << "\n"
      << "trim_ms=" << ms(r.wall_ms) << "\n";
}

int cmd_stitch(const StitchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.cl_avg < -1) {
    err << "error: --cl-avg must be -1 or at least 0\n";
    return 2;
  }
  const unsigned io_jobs = a.jobs ? a.jobs : default_jobs();
  ProofBundle bundle =
      a.proofs.empty()
          ? load_bundle_icnf(a.cnf, a.icnf, a.manifest, io_jobs)
          : load_bundle(a.cnf, a.proofs, io_jobs);
  const Formula formula = std::move(bundle.instance);
  const CubeTree tree = build_cube_tree(std::move(bundle));
  const StitchPlan plan = make_plan(tree);

  CombineOptions opts;
  opts.cl_avg = a.cl_avg;
  opts.jobs = a.jobs ? a.jobs
                     : std::max<unsigned>(
                           1, std::min<unsigned>(
                                  default_jobs(),
                                  static_cast<unsigned>(std::max<std::size_t>(
                                      {plan.widest(), tree.leaf_count(), 1}))));
  opts.precheck = !a.skip_precheck;
  opts.leaf_mode = a.strict ? CheckMode::kStrict : CheckMode::kPermissive;
  opts.strip_deletions = a.strip_deletions;
  if (!a.spill_dir.empty()) {
    fs::create_directories(a.spill_dir);
    opts.spill_dir = fs::path(a.spill_dir);
  }

  CombineResult result = combine_all(formula, tree, opts);
  std::size_t trims = 0;
  for (const LevelReport& lr : result.levels) {
    out << "level=" << lr.depth << " stitched=" << lr.stitched
        << " trimmed=" << lr.trimmed << " merge_ms=" << ms(lr.merge_ms)
        << " trim_ms=" << ms(lr.trim_ms) << "\n";
    trims += lr.trimmed;
  }
  if (tree.root().is_leaf() && a.cl_avg >= 0 &&
      clause_length_stats(result.proof).exceeds(a.cl_avg)) {
    TrimResult t = trim(formula, result.proof);
    result.proof = std::move(t.proof);
    out << "level=0 stitched=0 trimmed=1 merge_ms=0.000 trim_ms="
        << ms(t.report.wall_ms) << "\n";
    ++trims;
  }
  write_file(a.output, write_drat(result.proof));

  const ClauseLengthStats lengths = clause_length_stats(result.proof);
  out << "leaves=" << result.leaves << "\n"
      << "stitches=" << result.stitches.size() << "\n"
      << "trims=" << trims << "\n"
      << "jobs=" << opts.jobs << "\n"
      << "steps=" << result.proof.size() << "\n"
      << "bytes=" << serialized_size(result.proof) << "\n"
      << "avg_clause_length=" << ms(lengths.value()) << "\n"
      << "precheck_ms=" << ms(result.precheck_ms) << "\n";
  if (a.no_verify) return 0;

  const CheckReport r = check_refutation(formula, result.proof, CheckMode::kStrict);
  print_check(out, r);
  out << "check_ms=" << ms(r.stats.wall_ms) << "\n";
  if (!r.valid()) {
    err << "error: combined refutation does not check (" << to_string(r.reason)
        << (r.failing_step ? " at step " + std::to_string(*r.failing_step) : "")
        << ")\n";
    return 1;
  }
  if (!is_preserving(result.proof)) {
    err << "error: combined refutation is not preserving\n";
    return 1;
  }
  return 0;
}

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  const Formula formula = load_dimacs(a.cnf).formula;
  const Refutation proof = load_drat(a.drat);
  const CheckReport r = check_refutation(
      formula, proof, a.permissive ? CheckMode::kPermissive : CheckMode::kStrict);
  print_check(out, r);
  out << "check_ms=" << ms(r.stats.wall_ms) << "\n";
  if (!r.valid()) {
    err << "error: proof rejected (" << to_string(r.reason)
        << (r.failing_step ? " at step " + std::to_string(*r.failing_step) : "")
        << ")\n";
    return 1;
  }
  return 0;
}

int cmd_trim(const TrimArgs& a, std::ostream& out, std::ostream&) {
  const Formula formula = load_dimacs(a.cnf).formula;
  const Refutation proof = load_drat(a.drat);
  TrimOptions opts;
  opts.resynthesize_deletions = !a.no_resynthesis;
  opts.input_mode = a.permissive ? CheckMode::kPermissive : CheckMode::kStrict;
  const TrimResult t = trim(formula, proof, opts);
  write_file(a.output, write_drat(t.proof));
  if (!a.core.empty()) write_file(a.core, write_dimacs(t.core));
  print_trim(out, t.report);
  return 0;
}

int cmd_fixture(const FixtureArgs& a, std::ostream& out, std::ostream&) {
  const Formula f = gen_random_unsat(a.vars, a.ratio, a.seed);
  const std::vector<Cube> cubes = split(f, a.depth);
  const fs::path dir(a.output);
  fs::create_directories(dir);
  write_file(dir / "f.cnf", write_dimacs(f));
  std::size_t steps = 0;
  for (const Cube& cube : cubes) {
    const SolveOutcome s = solve_drup(with_cube_units(f, cube), a.seed);
    if (s.result != SolveResult::kUnsat) {
      throw Error(ErrorCode::kInvalidInput,
                  "sub-problem " + to_string(cube) + " is satisfiable");
    }
    steps += s.refutation.size();
    write_file(dir / filename_from_cube(cube), write_drat(s.refutation));
  }
  out << "cnf=" << (dir / "f.cnf").string() << "\n"
      << "vars=" << f.max_var() << "\n"
      << "clauses=" << f.total_clauses() << "\n"
      << "proofs=" << cubes.size() << "\n"
      << "proof_steps=" << steps << "\n";
  return 0;
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream&) {
  const Formula f = load_dimacs(a.cnf).formula;
  const SolveOutcome s = solve_drup(f, a.seed, a.max_conflicts);
  out << "result=" << (s.result == SolveResult::kSat ? "sat" : "unsat") << "\n"
      << "conflicts=" << s.conflicts << "\n";
  if (s.result == SolveResult::kSat) {
    out << "assignment=";
    for (std::size_t v = 1; v < s.assignment.size(); ++v) {
      out << (v > 1 ? " " : "") << (s.assignment[v] ? "" : "-") << v;
    }
    out << "\n";
  } else {
    out << "proof_steps=" << s.refutation.size() << "\n";
    if (!a.proof.empty()) write_file(a.proof, write_drat(s.refutation));
  }
  return 0;
}

int cmd_split(const SplitArgs& a, std::ostream& out, std::ostream&) {
  const Formula f = load_dimacs(a.cnf).formula;
  const std::string text = write_icnf_cubes(split(f, a.depth));
  if (a.output.empty()) {
    out << text;
  } else {
    write_file(a.output, text);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Combine, trim and check DRAT refutations of split SAT problems",
               "dcproof"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  StitchArgs sa;
  auto* stitch = app.add_subcommand(
      "stitch", "combine the refutations of a cube bundle into one refutation");
  stitch->add_option("--cnf", sa.cnf, "original instance (DIMACS)")->required();
  auto* proofs = stitch->add_option(
      "--proofs", sa.proofs, "directory of cube-named .proof files");
  auto* icnf = stitch->add_option("--icnf", sa.icnf, "cubes as iCNF 'a' lines");
  auto* manifest = stitch->add_option(
      "--manifest", sa.manifest, "proof paths, one per cube of --icnf");
  proofs->excludes(icnf)->excludes(manifest);
  icnf->needs(manifest);
  manifest->needs(icnf);
  stitch->add_option("--cl-avg", sa.cl_avg,
                     "trim when the average clause length exceeds this; "
                     "0 always, -1 never")
      ->capture_default_str();
  stitch->add_option("-j,--jobs", sa.jobs,
                     "worker threads (default: processors, capped at the "
                     "widest level)");
  stitch->add_option("-o,--output", sa.output, "output DRAT file")->required();
  auto* strict = stitch->add_flag("--strict", sa.strict,
                                  "reject leaf deletions of absent clauses");
  stitch->add_flag("--permissive", sa.permissive,
                   "drop leaf deletions of absent clauses (default)")
      ->excludes(strict);
  stitch->add_flag("--no-verify", sa.no_verify,
                   "skip the final check of the combined proof");
  stitch->add_flag("--strip-deletions", sa.strip_deletions,
                   "repair non-preserving leaves by dropping their deletions");
  stitch->add_option("--spill-dir", sa.spill_dir,
                     "keep large intermediate proofs on disk here");
  stitch->add_flag("--unsafe-skip-precheck", sa.skip_precheck,
                   "do not validate leaf proofs before stitching");

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "check a DRAT refutation");
  check->add_option("cnf", ca.cnf, "instance (DIMACS)")->required();
  check->add_option("drat", ca.drat, "proof (DRAT)")->required();
  auto* cstrict = check->add_flag("--strict", ca.strict,
                                  "deleting an absent clause fails (default)");
  check->add_flag("--permissive", ca.permissive,
                  "skip deletions of absent clauses")
      ->excludes(cstrict);

  TrimArgs ta;
  auto* trim_cmd = app.add_subcommand("trim", "trim a valid DRAT refutation");
  trim_cmd->add_option("cnf", ta.cnf, "instance (DIMACS)")->required();
  trim_cmd->add_option("drat", ta.drat, "proof (DRAT)")->required();
  trim_cmd->add_option("-o,--output", ta.output, "trimmed proof")->required();
  trim_cmd->add_option("--emit-core", ta.core, "write the unsat core (DIMACS)");
  trim_cmd->add_flag("--no-delete-resynthesis", ta.no_resynthesis,
                     "do not add deletions after last uses");
  trim_cmd->add_flag("--permissive", ta.permissive,
                     "skip deletions of absent clauses in the input");

  FixtureArgs fa;
  auto* fixture = app.add_subcommand(
      "fixture", "generate a random instance with split sub-proofs");
  fixture->add_option("--vars", fa.vars, "variables")->capture_default_str();
  fixture->add_option("--ratio", fa.ratio, "clauses per variable")
      ->capture_default_str();
  fixture->add_option("--depth", fa.depth, "split depth")->capture_default_str();
  fixture->add_option("--seed", fa.seed, "random seed")->capture_default_str();
  fixture->add_option("-o,--output", fa.output, "output directory")->required();

  SolveArgs so;
  auto* solve = app.add_subcommand("solve", "solve an instance, logging DRUP");
  solve->add_option("cnf", so.cnf, "instance (DIMACS)")->required();
  solve->add_option("--seed", so.seed, "random seed")->capture_default_str();
  solve->add_option("--max-conflicts", so.max_conflicts, "0 for no limit")
      ->capture_default_str();
  solve->add_option("--proof", so.proof, "write the refutation here");

  SplitArgs sp;
  auto* split_cmd = app.add_subcommand("split", "print cubes as iCNF");
  split_cmd->add_option("cnf", sp.cnf, "instance (DIMACS)")->required();
  split_cmd->add_option("--depth", sp.depth, "split depth")->capture_default_str();
  split_cmd->add_option("-o,--output", sp.output, "output file");

  std::vector<const char*> argv{"dcproof"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (*stitch && sa.proofs.empty() && sa.icnf.empty()) {
    err << "error: stitch needs --proofs or --icnf with --manifest\n";
    return 2;
  }

  try {
    if (*stitch) return cmd_stitch(sa, out, err);
    if (*check) return cmd_check(ca, out, err);
    if (*trim_cmd) return cmd_trim(ta, out, err);
    if (*fixture) return cmd_fixture(fa, out, err);
    if (*solve) return cmd_solve(so, out, err);
    if (*split_cmd) return cmd_split(sp, out, err);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return is_environmental(e.code()) ? 2 : 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace dcproof::cli
