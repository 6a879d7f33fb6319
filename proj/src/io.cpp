#include "dcproof/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dcproof/parallel.hpp"

namespace dcproof {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Whitespace-separated tokens with line tracking for diagnostics.
class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  // Skips whitespace; returns false at end of input.
  bool skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    return pos_ < text_.size();
  }

  char peek() const { return text_[pos_]; }

  std::string_view next_token() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void skip_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }

  std::size_t line() const { return line_; }

  [[noreturn]] void fail(ErrorCode code, const std::string& what) const {
    throw Error(code, "line " + std::to_string(line_) + ": " + what);
  }

  std::int32_t parse_int(std::string_view tok) const {
    std::int32_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() ||
        value == INT32_MIN) {
      fail(ErrorCode::kNonIntegerToken,
           "expected an integer, got '" + std::string(tok) + "'");
    }
    return value;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

void append_int(std::string& out, std::int32_t v) {
  char buf[16];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

std::size_t int_width(std::int32_t v) {
  std::size_t n = v < 0 ? 2 : 1;
  std::uint32_t u = v < 0 ? static_cast<std::uint32_t>(-static_cast<std::int64_t>(v))
                          : static_cast<std::uint32_t>(v);
  while (u >= 10) {
    u /= 10;
    ++n;
  }
  return n;
}

void append_clause_line(std::string& out, const Clause& clause) {
  for (Literal lit : clause) {
    append_int(out, lit.value());
    out.push_back(' ');
  }
  out.append("0\n");
}

[[noreturn]] void rethrow_with_path(const Error& e,
                                    const std::filesystem::path& path) {
  throw Error(e.code(), path.string() + ": " + e.what());
}

}  // namespace

Cube::Cube(std::vector<Literal> literals) : literals_(std::move(literals)) {
  std::set<Var> seen;
  for (Literal lit : literals_) {
    if (!seen.insert(lit.var()).second) {
      throw Error(ErrorCode::kDuplicateVariableInCube,
                  "variable " + std::to_string(lit.var()) +
                      " occurs twice in cube");
    }
  }
}

Cube::Cube(std::initializer_list<std::int32_t> values)
    : Cube([&] {
        std::vector<Literal> lits;
        for (std::int32_t v : values) lits.emplace_back(v);
        return lits;
      }()) {}

Cube Cube::extended(Literal lit) const {
  std::vector<Literal> lits = literals_;
  lits.push_back(lit);
  return Cube(std::move(lits));
}

std::string to_string(const Cube& cube) {
  if (cube.depth() == 0) return "()";
  std::string s = "(";
  for (std::size_t i = 0; i < cube.depth(); ++i) {
    if (i) s += ",";
    s += std::to_string(cube[i].value());
  }
  return s + ")";
}

Formula with_cube_units(Formula formula, const Cube& cube) {
  for (Literal lit : cube.literals()) formula.add(Clause(std::vector{lit}));
  return formula;
}

DimacsFile parse_dimacs(std::string_view text) {
  DimacsFile out;
  Tokenizer tok(text);
  bool have_header = false;
  std::vector<Literal> clause;
  bool in_clause = false;
  while (tok.skip_space()) {
    char c = tok.peek();
    if (c == 'c') {
      tok.skip_line();
      continue;
    }
    if (c == 'p') {
      if (have_header || in_clause) {
        tok.fail(ErrorCode::kMalformedHeader, "unexpected 'p' line");
      }
      tok.next_token();
      std::string_view fmt, vars, clauses;
      if (tok.skip_space()) fmt = tok.next_token();
      if (tok.skip_space()) vars = tok.next_token();
      if (tok.skip_space()) clauses = tok.next_token();
      std::int32_t v = 0;
      std::int64_t n = 0;
      auto okv = std::from_chars(vars.data(), vars.data() + vars.size(), v);
      auto okc = std::from_chars(clauses.data(),
                                 clauses.data() + clauses.size(), n);
      if (fmt != "cnf" || okv.ec != std::errc() ||
          okv.ptr != vars.data() + vars.size() || okc.ec != std::errc() ||
          okc.ptr != clauses.data() + clauses.size() || v < 0 || n < 0) {
        tok.fail(ErrorCode::kMalformedHeader, "expected 'p cnf <vars> <clauses>'");
      }
      out.declared_vars = v;
      out.declared_clauses = static_cast<std::size_t>(n);
      have_header = true;
      continue;
    }
    std::string_view t = tok.next_token();
    if (!have_header) {
      tok.fail(ErrorCode::kMalformedHeader, "clause data before 'p cnf' header");
    }
    std::int32_t v = tok.parse_int(t);
    if (v == 0) {
      std::size_t before = clause.size();
      Clause parsed(std::move(clause));
      out.duplicate_literals += before - parsed.size();
      out.formula.add(parsed);
      clause = {};
      in_clause = false;
    } else {
      clause.emplace_back(v);
      in_clause = true;
    }
  }
  if (in_clause) {
    tok.fail(ErrorCode::kLiteralAfterMissingTerminator,
             "end of input inside a clause (missing 0)");
  }
  if (!have_header) {
    tok.fail(ErrorCode::kMalformedHeader, "missing 'p cnf' header");
  }
  return out;
}

std::string write_dimacs(const Formula& formula) {
  std::string out = "p cnf " + std::to_string(formula.max_var()) + " " +
                    std::to_string(formula.total_clauses()) + "\n";
  formula.for_each([&](const Clause& c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) append_clause_line(out, c);
  });
  return out;
}

Refutation parse_drat(std::string_view text) {
  Refutation proof;
  Tokenizer tok(text);
  std::vector<Literal> clause;
  bool in_clause = false;
  bool deletion = false;
  while (tok.skip_space()) {
    char c = tok.peek();
    if (c == 'c' && !in_clause) {
      tok.skip_line();
      continue;
    }
    std::string_view t = tok.next_token();
    if (t == "d" && !in_clause) {
      deletion = true;
      in_clause = true;
      continue;
    }
    std::int32_t v = tok.parse_int(t);
    if (v == 0) {
      proof.push_back({deletion ? StepKind::kDelete : StepKind::kAdd,
                       Clause(std::move(clause))});
      clause = {};
      in_clause = false;
      deletion = false;
    } else {
      clause.emplace_back(v);
      in_clause = true;
    }
  }
  if (in_clause) {
    tok.fail(ErrorCode::kMissingTerminator,
             "end of input inside a proof step (missing 0)");
  }
  return proof;
}

std::string write_drat(const Refutation& proof) {
  std::string out;
  out.reserve(serialized_size(proof));
  for (const ProofStep& step : proof) {
    if (!step.is_add()) out.append("d ");
    append_clause_line(out, step.clause);
  }
  return out;
}

std::size_t serialized_size(const ProofStep& step) {
  std::size_t n = step.is_add() ? 2 : 4;  // "0\n" and "d "
  for (Literal lit : step.clause) n += int_width(lit.value()) + 1;
  return n;
}

std::size_t serialized_size(const Refutation& proof) {
  std::size_t n = 0;
  for (const ProofStep& step : proof) n += serialized_size(step);
  return n;
}

Cube cube_from_filename(std::string_view name) {
  if (auto slash = name.find_last_of("/\\"); slash != std::string_view::npos) {
    name.remove_prefix(slash + 1);
  }
  auto bad = [&](const std::string& why) -> Error {
    return Error(ErrorCode::kBadCubeFilename,
                 "bad cube file name '" + std::string(name) + "': " + why);
  };
  constexpr std::string_view kSuffix = ".proof";
  if (name.size() <= kSuffix.size() || !name.ends_with(kSuffix)) {
    throw bad("expected <lit>(_<lit>)*.proof");
  }
  std::string_view stem = name.substr(0, name.size() - kSuffix.size());
  if (stem == "root") return Cube();

  std::vector<Literal> lits;
  while (true) {
    std::size_t us = stem.find('_');
    std::string_view part = stem.substr(0, us);
    std::int32_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size() ||
        v == 0 || v == INT32_MIN) {
      throw bad("'" + std::string(part) + "' is not a nonzero literal");
    }
    lits.emplace_back(v);
    if (us == std::string_view::npos) break;
    stem.remove_prefix(us + 1);
  }
  return Cube(std::move(lits));
}

std::string filename_from_cube(const Cube& cube) {
  if (cube.depth() == 0) return "root.proof";
  std::string s;
  for (std::size_t i = 0; i < cube.depth(); ++i) {
    if (i) s += '_';
    s += std::to_string(cube[i].value());
  }
  return s + ".proof";
}

std::vector<Cube> parse_icnf_cubes(std::string_view text) {
  std::vector<Cube> cubes;
  Tokenizer tok(text);
  while (tok.skip_space()) {
    if (tok.peek() != 'a') {
      tok.skip_line();
      continue;
    }
    std::string_view head = tok.next_token();
    if (head != "a") {
      tok.skip_line();
      continue;
    }
    std::vector<Literal> lits;
    bool terminated = false;
    while (tok.skip_space()) {
      std::int32_t v = tok.parse_int(tok.next_token());
      if (v == 0) {
        terminated = true;
        break;
      }
      lits.emplace_back(v);
    }
    if (!terminated) {
      tok.fail(ErrorCode::kMissingTerminator, "cube line without final 0");
    }
    cubes.emplace_back(std::move(lits));
  }
  return cubes;
}

std::string write_icnf_cubes(const std::vector<Cube>& cubes) {
  std::string out;
  for (const Cube& cube : cubes) {
    out += "a ";
    for (Literal lit : cube.literals()) {
      append_int(out, lit.value());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::kIoError, "error reading '" + path.string() + "'");
  }
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError,
                "cannot open '" + path.string() + "' for writing");
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIoError, "error writing '" + path.string() + "'");
  }
}

DimacsFile load_dimacs(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_dimacs(text);
  } catch (const Error& e) {
    rethrow_with_path(e, path);
  }
}

Refutation load_drat(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_drat(text);
  } catch (const Error& e) {
    rethrow_with_path(e, path);
  }
}

namespace {

ProofBundle assemble_bundle(const std::filesystem::path& cnf_path,
                            std::vector<std::pair<Cube, std::filesystem::path>> items,
                            unsigned jobs) {
  std::map<Cube, std::filesystem::path> seen;
  for (const auto& [cube, path] : items) {
    auto [it, inserted] = seen.emplace(cube, path);
    if (!inserted) {
      throw Error(ErrorCode::kDuplicateCube,
                  "cube " + to_string(cube) + " given by both '" +
                      it->second.string() + "' and '" + path.string() + "'");
    }
  }

  ProofBundle bundle;
  bundle.instance = load_dimacs(cnf_path).formula;
  std::sort(items.begin(), items.end());
  bundle.entries.resize(items.size());
  parallel_for(items.size(), jobs, [&](std::size_t i) {
    BundleEntry& entry = bundle.entries[i];
    entry.cube = items[i].first;
    entry.source = items[i].second;
    try {
      entry.proof = parse_drat(read_file(entry.source));
    } catch (const Error& e) {
      throw Error(ErrorCode::kUnreadableProof,
                  "unreadable proof '" + entry.source.string() + "': " + e.what());
    }
  });
  return bundle;
}

}  // namespace

ProofBundle load_bundle(const std::filesystem::path& cnf_path,
                        const std::filesystem::path& proof_dir, unsigned jobs) {
  std::error_code ec;
  if (!std::filesystem::is_directory(proof_dir, ec)) {
    throw Error(ErrorCode::kIoError,
                "'" + proof_dir.string() + "' is not a directory");
  }
  std::vector<std::pair<Cube, std::filesystem::path>> items;
  for (const auto& de : std::filesystem::recursive_directory_iterator(proof_dir)) {
    if (!de.is_regular_file()) continue;
    std::string name = de.path().filename().string();
    if (!name.ends_with(".proof")) continue;
    items.emplace_back(cube_from_filename(name), de.path());
  }
  // Directory iteration order is unspecified; make duplicate reports stable.
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return assemble_bundle(cnf_path, std::move(items), jobs);
}

ProofBundle load_bundle_icnf(const std::filesystem::path& cnf_path,
                             const std::filesystem::path& icnf_path,
                             const std::filesystem::path& manifest_path,
                             unsigned jobs) {
  std::vector<Cube> cubes;
  try {
    cubes = parse_icnf_cubes(read_file(icnf_path));
  } catch (const Error& e) {
    rethrow_with_path(e, icnf_path);
  }
  std::vector<std::filesystem::path> proofs;
  {
    std::istringstream lines(read_file(manifest_path));
    std::string line;
    while (std::getline(lines, line)) {
      while (!line.empty() && is_space(line.back())) line.pop_back();
      std::size_t start = 0;
      while (start < line.size() && is_space(line[start])) ++start;
      if (start == line.size() || line[start] == '#') continue;
      std::filesystem::path p = line.substr(start);
      if (p.is_relative()) p = manifest_path.parent_path() / p;
      proofs.push_back(std::move(p));
    }
  }
  if (proofs.size() != cubes.size()) {
    throw Error(ErrorCode::kManifestMismatch,
                "'" + icnf_path.string() + "' has " +
                    std::to_string(cubes.size()) + " cubes but '" +
                    manifest_path.string() + "' lists " +
                    std::to_string(proofs.size()) + " proofs");
  }
  std::vector<std::pair<Cube, std::filesystem::path>> items;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    items.emplace_back(std::move(cubes[i]), std::move(proofs[i]));
  }
  return assemble_bundle(cnf_path, std::move(items), jobs);
}

}  // namespace dcproof
