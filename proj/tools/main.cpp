#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"d-Euclidean distance matrix completion toolkit"};
  app.require_subcommand(1);

  std::string path;

  auto* solve = app.add_subcommand("solve", "decide d-EDMC for an instance file");
  edmc::cli::SolveOptions sopts;
  solve->add_option("path", path, "instance file")->required();
  solve->add_option("--dim", sopts.dim, "target dimension (default: from the file)");
  solve->add_option("--strategy", sopts.strategy, "auto|chordal|fillin|exact");
  solve->add_option("--kmax", sopts.kmax, "fill-in budget");
  solve->add_option("--exact-cap", sopts.exact_cap, "largest order for the exact route");
  solve->add_option("--restarts", sopts.restarts, "backend restarts");
  solve->add_option("--threads", sopts.threads, "concurrency cap");
  solve->add_option("--seed", sopts.seed, "random seed");
  solve->add_flag("--verify", sopts.verify, "run extra precondition checks");
  solve->add_flag("--report", sopts.report, "emit a structured run report");
  solve->add_option("--out", sopts.witness_out, "write the completion witness here");

  auto* compress = app.add_subcommand("compress", "shrink an instance, preserving the answer");
  edmc::cli::CompressOptions copts;
  compress->add_option("path", path, "instance file")->required();
  compress->add_option("--dim", copts.dim, "target dimension (default: from the file)");
  compress->add_option("--scheme", copts.scheme, "ktt|maxdeg|cover")->required();
  compress->add_option("--t", copts.t, "block-pattern parameter");
  compress->add_option("--delta", copts.delta, "per-row unspecified bound");
  compress->add_option("--k", copts.k, "cover size for the search (<= 6)");
  compress->add_option("--cover-file", copts.cover_file, "cover file, one clique per line");
  compress->add_option("--out", copts.out, "reduced instance path");
  compress->add_flag("--verify", copts.verify, "verify the scheme precondition first");
  compress->add_flag("--report", copts.report, "emit a structured run report");

  auto* generate = app.add_subcommand("generate", "write a generated instance");
  edmc::cli::GenerateOptions gopts;
  generate->add_option("kind", gopts.kind, "masked|saxe")->required();
  generate->add_option("--n", gopts.n, "point count (masked) or cycle length (saxe)");
  generate->add_option("--d", gopts.dim, "ambient dimension for masked clouds");
  generate->add_option("--mask", gopts.mask, "perrow|blockfree|chordal|cover");
  generate->add_option("--delta", gopts.delta, "per-row budget");
  generate->add_option("--t", gopts.t, "excluded block size");
  generate->add_option("--k", gopts.k, "cover size");
  generate->add_option("--eps", gopts.eps, "density parameter for saxe");
  generate->add_option("--weights", gopts.weights, "comma-separated cycle weights");
  generate->add_option("--seed", gopts.seed, "random seed");
  generate->add_option("--out", gopts.out, "output path");

  auto* oracle = app.add_subcommand("oracle", "run the numerical cross-validation oracle");
  edmc::cli::OracleOptions oopts;
  oracle->add_option("path", path, "instance file")->required();
  oracle->add_option("--dim", oopts.dim, "target dimension (default: from the file)");
  oracle->add_option("--restarts", oopts.restarts, "multistart budget");
  oracle->add_option("--threads", oopts.threads, "concurrent restarts");
  oracle->add_option("--seed", oopts.seed, "random seed");
  oracle->add_flag("--report", oopts.report, "emit a structured run report");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return edmc::cli::cmd_solve(path, sopts, std::cout, std::cerr);
  if (compress->parsed()) return edmc::cli::cmd_compress(path, copts, std::cout, std::cerr);
  if (generate->parsed()) return edmc::cli::cmd_generate(gopts, std::cout, std::cerr);
  if (oracle->parsed()) return edmc::cli::cmd_oracle(path, oopts, std::cout, std::cerr);
  return edmc::cli::kExitError;
}
