#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "edmc/chordal.hpp"
#include "edmc/compress.hpp"
#include "edmc/instances.hpp"
#include "edmc/polysolve.hpp"

namespace edmc::cli {

namespace {

std::string basename_of(const std::string& path) {
  const size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string join_indices(const std::vector<int>& idx) {
  std::string out;
  for (int v : idx) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v + 1);  // 1-based in all human-readable output
  }
  return out;
}

struct Report {
  std::string instance_id, command, answer, certificate, params;
  std::vector<int> removed;
  double wall_ms = 0.0;

  void render(std::ostream& os) const {
    os << "report:\n";
    os << "  instance: " << instance_id << '\n';
    os << "  command: " << command << '\n';
    os << "  answer: " << answer << '\n';
    os << "  certificate: " << certificate << '\n';
    os << "  params: " << params << '\n';
    os << "  removed: " << join_indices(removed) << '\n';
    os << "  wall_ms: " << wall_ms << '\n';
  }
};

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int answer_exit(const std::string& answer) {
  if (answer == "yes") return kExitYes;
  if (answer == "no") return kExitNo;
  return kExitUnknown;
}

// Final soundness check on any yes answer: the witness must reproduce every
// specified input entry.
bool witness_ok(const PartialMatrix& input, const Realization& real,
                const Tolerances& tol) {
  return realization_residual(input, real.points) <=
         tol.real_threshold(input.max_abs_entry());
}

void write_witness(const std::string& path, const PartialMatrix& completion, int d) {
  if (path.empty()) return;
  InstanceFile f;
  f.matrix = completion;
  f.d = d;
  save_instance(path, f);
}

}  // namespace

int cmd_solve(const std::string& path, const SolveOptions& opts, std::ostream& out,
              std::ostream& err) {
  Stopwatch watch;
  RedactedInstance inst;
  try {
    inst = load_redacted(path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  const int d = opts.dim >= 0 ? opts.dim : inst.d;
  const Tolerances& tol = Tolerances::defaults();

  Report rep;
  rep.instance_id = basename_of(path);
  rep.command = "solve";
  rep.answer = "unknown";
  rep.certificate = "none";
  {
    std::ostringstream p;
    p << "dim=" << d << " strategy=" << opts.strategy << " kmax=" << opts.kmax
      << " exact-cap=" << opts.exact_cap << " restarts=" << opts.restarts
      << " threads=" << opts.threads << " seed=" << opts.seed;
    rep.params = p.str();
  }

  edmc::SolveOptions sopts;
  sopts.kmax = opts.kmax;
  sopts.decide.restarts = opts.restarts;

  try {
    const UnderlyingGraph g = UnderlyingGraph::of(inst.matrix);
    auto finish_yes = [&](const PartialMatrix& completion, const Realization& real) {
      if (!witness_ok(inst.matrix, real, tol)) {
        rep.answer = "unknown";
        err << "warning: witness failed verification; degrading to unknown\n";
        return;
      }
      rep.answer = "yes";
      rep.certificate = "realization";
      write_witness(opts.witness_out, completion, d);
    };

    auto run_chordal = [&]() -> bool {  // true when it produced a verdict
      if (!chordal(g)) return false;
      const ChordalCompletion comp = chordal_complete(inst.matrix, d, tol);
      if (comp.yes) {
        finish_yes(comp.completion, Realization{d, comp.points});
      } else {
        rep.answer = "no";
        rep.certificate = "failing clique";
        out << "witness clique: " << join_indices(comp.witness_clique) << '\n';
      }
      return true;
    };
    auto run_fillin = [&]() -> bool {
      const std::optional<FillIn> fill = min_fill_in(g, opts.kmax);
      if (!fill) return false;
      const SolveOutcome res = solve_fillin(inst.matrix, d, sopts, tol);
      if (res.answer == SolveOutcome::Answer::Yes) {
        finish_yes(*res.completion, *res.realization);
        return true;
      }
      if (res.answer == SolveOutcome::Answer::No) {
        rep.answer = "no";
        rep.certificate = "refutation";
        if (!res.note.empty()) out << "note: " << res.note << '\n';
        return true;
      }
      if (!res.note.empty()) out << "note: " << res.note << '\n';
      return false;  // unknown: let auto fall through
    };
    auto run_exact = [&]() -> bool {
      if (inst.matrix.n() > opts.exact_cap) {
        err << "note: instance order exceeds --exact-cap\n";
        return false;
      }
      const SolveOutcome res = solve_exact(inst.matrix, d, sopts, tol);
      if (res.answer == SolveOutcome::Answer::Yes) {
        finish_yes(*res.completion, *res.realization);
        return true;
      }
      if (res.answer == SolveOutcome::Answer::No) {
        rep.answer = "no";
        rep.certificate = "refutation";
        return true;
      }
      return false;
    };

    bool decided = false;
    if (opts.strategy == "chordal") {
      if (!chordal(g)) {
        err << "error: strategy 'chordal' requires a chordal underlying graph\n";
        return kExitError;
      }
      decided = run_chordal();
    } else if (opts.strategy == "fillin") {
      decided = run_fillin();
      if (!decided) out << "note: fill-in route inconclusive at kmax=" << opts.kmax << '\n';
    } else if (opts.strategy == "exact") {
      decided = run_exact();
    } else if (opts.strategy == "auto") {
      decided = run_chordal() || run_fillin() || run_exact();
      if (!decided)
        out << "note: no applicable strategy was conclusive (try raising --kmax or "
               "--exact-cap)\n";
    } else {
      err << "error: unknown strategy '" << opts.strategy << "'\n";
      return kExitError;
    }
    (void)decided;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    rep.answer = "unknown";
  }

  rep.wall_ms = watch.ms();
  out << "answer: " << rep.answer << '\n';
  if (opts.report) rep.render(out);
  return answer_exit(rep.answer);
}

namespace {

CliqueCover read_cover_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cover file '" + path + "'");
  CliqueCover cover;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<int> clique;
    long v;
    while (ls >> v) {
      if (v < 1 || v > n) throw Error("cover index out of range");
      clique.push_back(static_cast<int>(v - 1));
    }
    if (!clique.empty()) cover.cliques.push_back(std::move(clique));
  }
  return cover;
}

}  // namespace

int cmd_compress(const std::string& path, const CompressOptions& opts, std::ostream& out,
                 std::ostream& err) {
  Stopwatch watch;
  RedactedInstance inst;
  try {
    inst = load_redacted(path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  const int d = opts.dim >= 0 ? opts.dim : inst.d;

  Report rep;
  rep.instance_id = basename_of(path);
  rep.command = "compress";
  rep.answer = "reduced";
  rep.certificate = "none";
  {
    std::ostringstream p;
    p << "dim=" << d << " scheme=" << opts.scheme;
    if (opts.scheme == "ktt") p << " t=" << opts.t;
    if (opts.scheme == "maxdeg") p << " delta=" << opts.delta;
    if (opts.scheme == "cover") p << " k=" << opts.k;
    rep.params = p.str();
  }

  CompressOutcome outcome;
  try {
    if (opts.scheme == "ktt") {
      outcome = compress_ktt(inst.matrix, d, opts.t, opts.verify);
    } else if (opts.scheme == "maxdeg") {
      outcome = compress_maxdeg(inst.matrix, d, opts.delta);
    } else if (opts.scheme == "cover") {
      CliqueCover cover;
      if (!opts.cover_file.empty()) {
        cover = read_cover_file(opts.cover_file, inst.matrix.n());
      } else {
        if (opts.k > 6) {
          err << "error: cover search refuses k > 6; provide --cover-file\n";
          return kExitError;
        }
        const auto found =
            edge_clique_cover_search(UnderlyingGraph::of(inst.matrix), opts.k);
        if (!found) {
          err << "error: no edge clique cover of size <= " << opts.k << '\n';
          return kExitError;
        }
        cover = *found;
      }
      outcome = compress_cliquecover(inst.matrix, d, cover);
    } else {
      err << "error: unknown scheme '" << opts.scheme << "'\n";
      return kExitError;
    }
  } catch (const PreconditionViolated& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const InvalidCover& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  rep.removed = outcome.removed;
  int code = kExitYes;
  if (outcome.kind == CompressOutcome::Kind::Solved) {
    rep.answer = outcome.answer_yes ? "yes" : "no";
    rep.certificate = outcome.answer_yes ? "realization" : "failing clique";
    out << "solved: " << rep.answer << '\n';
    if (!outcome.answer_yes)
      out << "witness clique: " << join_indices(outcome.witness_clique) << '\n';
    code = answer_exit(rep.answer);
  } else {
    const std::string target = opts.out.empty() ? path + ".reduced" : opts.out;
    InstanceFile f;
    f.matrix = outcome.reduced;
    f.d = d;
    save_instance(target, f);
    out << "reduced: " << outcome.reduced.n() << " rows -> " << target << '\n';
    out << "removed: " << join_indices(outcome.removed) << '\n';
    code = kExitYes;
  }
  rep.wall_ms = watch.ms();
  if (opts.report) rep.render(out);
  return code;
}

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    InstanceFile inst;
    if (opts.kind == "masked") {
      MaskModel mask;
      if (opts.mask == "perrow")
        mask = MaskModel::per_row_budget(opts.delta);
      else if (opts.mask == "blockfree")
        mask = MaskModel::block_free(opts.t);
      else if (opts.mask == "chordal")
        mask = MaskModel::chordal_graph();
      else if (opts.mask == "cover")
        mask = MaskModel::clique_cover(opts.k);
      else {
        err << "error: unknown mask '" << opts.mask << "'\n";
        return kExitError;
      }
      inst = gen_masked_pointcloud(opts.n, opts.dim, mask, opts.seed);
    } else if (opts.kind == "saxe") {
      WeightedGraph g;
      g.n = opts.n;
      std::vector<int> weights;
      if (!opts.weights.empty()) {
        std::istringstream ws(opts.weights);
        std::string tok;
        while (std::getline(ws, tok, ',')) weights.push_back(std::stoi(tok));
        if (static_cast<int>(weights.size()) != opts.n)
          throw Error("need exactly n cycle weights");
      } else {
        // A line-realizable default: all ones for even n, ones plus a two
        // for odd n.
        weights.assign(opts.n, 1);
        if (opts.n % 2 == 1) weights.back() = 2;
      }
      for (int i = 0; i < opts.n; ++i)
        g.edges.emplace_back(i, (i + 1) % opts.n, weights[i]);
      inst = gen_saxe(g, opts.eps);
    } else {
      err << "error: unknown generator '" << opts.kind << "'\n";
      return kExitError;
    }
    const std::string target = opts.out.empty() ? "instance.edm" : opts.out;
    save_instance(target, inst);
    out << "generated: " << inst.matrix.n() << " rows -> " << target << '\n';
    return kExitYes;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_oracle(const std::string& path, const OracleOptions& opts, std::ostream& out,
               std::ostream& err) {
  Stopwatch watch;
  RedactedInstance inst;
  try {
    inst = load_redacted(path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  const int d = opts.dim >= 0 ? opts.dim : inst.d;
  edmc::OracleOptions oopts;
  oopts.restarts = opts.restarts;
  oopts.seed = opts.seed;
  oopts.threads = opts.threads;
  const OracleResult res = oracle_solve(inst.matrix, d, oopts);

  Report rep;
  rep.instance_id = basename_of(path);
  rep.command = "oracle";
  rep.params = "dim=" + std::to_string(d) + " restarts=" + std::to_string(opts.restarts) +
               " seed=" + std::to_string(opts.seed);
  switch (res.kind) {
    case OracleResult::Kind::Yes:
      rep.answer = "yes";
      rep.certificate = "realization";
      break;
    case OracleResult::Kind::NoCertified:
      rep.answer = "no";
      rep.certificate = "failing clique";
      out << "witness clique: " << join_indices(res.witness_clique) << '\n';
      break;
    case OracleResult::Kind::Unknown:
      rep.answer = "unknown";
      rep.certificate = "none";
      break;
  }
  rep.wall_ms = watch.ms();
  out << "answer: " << rep.answer << '\n';
  if (opts.report) rep.render(out);
  return answer_exit(rep.answer);
}

}  // namespace edmc::cli
