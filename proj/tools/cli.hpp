#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace weightlab::cli {

/// Exit statuses of `run`.
enum Exit : int { kPass = 0, kCheckFailure = 1, kUsage = 2, kResourceCap = 3 };

/// Everything one invocation needs. Defaults match the command-line defaults.
struct RunConfig {
  std::string command;     // build | eval | cantor | verify | report
  std::string subcommand;  // eval: hilbert | maximal; cantor: zeros; verify: suite name or "all"

  // construction
  std::vector<int> ks{4};
  std::optional<int> depth;  // 2, or 1 for gliding
  std::string sign_rule = "greedy";
  double residual_cap = 1e6;

  // exponents and suite parameters
  std::vector<std::string> ps{"2"};  // Lebesgue exponents p; prop51 uses p' = p/(p-1)
  double eps = 0.75;
  int K_max = 4;
  int translated = 0;  // sawyer: also test the sum of w_1..w_K translated by 3^k
  int r = 1;
  int T = 2;
  std::optional<int> R;  // r + 10
  std::string grids = "both";    // linearization: dyadic | shifted | both
  int j_min = -40, j_max = 8;

  // tolerances and sample counts
  double tol = 1e-6;
  double quad_tol = 1e-9;
  double oracle_tol = 0.0;  // eval hilbert: run the quadrature oracle when > 0
  std::size_t samples = 64;
  std::size_t hilbert_samples = 16;
  std::size_t random_q = 200;
  std::uint64_t seed = 20240601;

  // cantor zeros
  int r_max = 3;
  double zero_tol = 1e-10;
  int r_start = 10, r_limit = 22;

  // eval maximal
  std::string grid = "full";  // full | dyadic | shifted | both
  std::string linearize;      // "a,b": dump the linearization of M(1_Q w) on Q = [a, b)

  // paths
  std::string measure;  // input measure JSON
  std::string points;   // input CSV, one x per line
  std::string out;      // primary output (measure, CSV, zeros JSON); stdout when empty
  std::string json;     // verify: report JSON
  std::string csv;      // verify / report: plot-data CSV
  std::vector<std::string> inputs;  // report: report JSON files

  std::optional<unsigned> precision_bits;
};

/// Executes one command. Errors are printed to `err` as one JSON object.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it.
int main(int argc, char** argv);

}  // namespace weightlab::cli
