#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace edmc::cli {

// Exit codes shared by every subcommand: 0 yes, 1 no, 2 unknown, 3 input or
// precondition error.
constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;

struct SolveOptions {
  int dim = -1;  // -1: use the dimension stored in the instance file
  std::string strategy = "auto";
  int kmax = 4;
  int exact_cap = 8;
  int restarts = 64;
  int threads = 1;
  std::uint64_t seed = 0;
  bool verify = false;
  bool report = false;
  std::string witness_out;  // write the completion here on yes, if nonempty
};

struct CompressOptions {
  int dim = -1;
  std::string scheme;  // ktt | maxdeg | cover
  int t = 2;
  int delta = 1;
  int k = 2;
  std::string cover_file;  // one clique per line, 1-based indices
  std::string out;         // reduced instance path (default <path>.reduced)
  bool verify = false;
  bool report = false;
};

struct GenerateOptions {
  std::string kind;  // masked | saxe
  int n = 10;
  int dim = 2;
  std::string mask = "perrow";  // perrow | blockfree | chordal | cover
  int delta = 1;
  int t = 2;
  int k = 2;
  double eps = 0.5;
  std::string weights;  // comma-separated cycle weights for saxe
  std::uint64_t seed = 0;
  std::string out;
};

struct OracleOptions {
  int dim = -1;
  int restarts = 64;
  int threads = 1;
  std::uint64_t seed = 0;
  bool report = false;
};

int cmd_solve(const std::string& path, const SolveOptions& opts, std::ostream& out,
              std::ostream& err);
int cmd_compress(const std::string& path, const CompressOptions& opts, std::ostream& out,
                 std::ostream& err);
int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::string& path, const OracleOptions& opts, std::ostream& out,
               std::ostream& err);

}  // namespace edmc::cli
