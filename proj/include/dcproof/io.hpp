#ifndef DCPROOF_IO_HPP
#define DCPROOF_IO_HPP

#include <compare>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dcproof/core.hpp"

namespace dcproof {

// Decision literals of one sub-problem, first decision first.
class Cube {
 public:
  Cube() = default;
  // Throws Error(kDuplicateVariableInCube) when a variable repeats.
  explicit Cube(std::vector<Literal> literals);
  Cube(std::initializer_list<std::int32_t> values);

  std::span<const Literal> literals() const noexcept { return literals_; }
  std::size_t depth() const noexcept { return literals_.size(); }
  Literal operator[](std::size_t i) const { return literals_[i]; }

  Cube extended(Literal lit) const;

  friend bool operator==(const Cube&, const Cube&) = default;
  friend auto operator<=>(const Cube&, const Cube&) = default;

 private:
  std::vector<Literal> literals_;
};

std::string to_string(const Cube& cube);

// The sub-problem instance: formula plus one unit clause per decision.
Formula with_cube_units(Formula formula, const Cube& cube);

struct DimacsFile {
  Formula formula;
  Var declared_vars = 0;
  std::size_t declared_clauses = 0;
  std::size_t duplicate_literals = 0;
};

DimacsFile parse_dimacs(std::string_view text);
std::string write_dimacs(const Formula& formula);

Refutation parse_drat(std::string_view text);
std::string write_drat(const Refutation& proof);
// Length of write_drat for one step, without materializing it.
std::size_t serialized_size(const ProofStep& step);
std::size_t serialized_size(const Refutation& proof);

// "1_-2.proof" -> (1, -2). "root.proof" names the depth-0 cube.
Cube cube_from_filename(std::string_view name);
std::string filename_from_cube(const Cube& cube);

// Cubes from iCNF "a l1 ... lk 0" lines; other lines are ignored.
std::vector<Cube> parse_icnf_cubes(std::string_view text);
std::string write_icnf_cubes(const std::vector<Cube>& cubes);

struct BundleEntry {
  Cube cube;
  Refutation proof;
  std::filesystem::path source;
};

struct ProofBundle {
  Formula instance;
  std::vector<BundleEntry> entries;  // sorted by cube
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

DimacsFile load_dimacs(const std::filesystem::path& path);
Refutation load_drat(const std::filesystem::path& path);

// Every "*.proof" file below proof_dir, recursively, with the cube taken from
// its file name. Files are parsed on up to `jobs` threads.
ProofBundle load_bundle(const std::filesystem::path& cnf_path,
                        const std::filesystem::path& proof_dir,
                        unsigned jobs = 1);

// The i-th "a" line of the iCNF file is paired with the i-th proof path of
// the manifest (one path per line, relative to the manifest's directory).
ProofBundle load_bundle_icnf(const std::filesystem::path& cnf_path,
                             const std::filesystem::path& icnf_path,
                             const std::filesystem::path& manifest_path,
                             unsigned jobs = 1);

}  // namespace dcproof

#endif  // DCPROOF_IO_HPP
