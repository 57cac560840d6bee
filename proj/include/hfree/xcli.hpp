#pragma once

// Command implementations behind the `hfree` executable. Argument parsing
// lives in tools/hfree.cpp; everything here takes plain structs and streams
// so it can be driven from tests.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hfree/bfs_tester.hpp"
#include "hfree/constructions.hpp"
#include "hfree/copies.hpp"
#include "hfree/diagnostics.hpp"
#include "hfree/dfs_tester.hpp"
#include "hfree/generators.hpp"
#include "hfree/graph.hpp"
#include "hfree/pattern.hpp"
#include "hfree/transcript_io.hpp"

namespace hfree::xcli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 2, kWorkCap = 3, kInvalidParameters = 4 };

enum class Format { Csv, Json };

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw InvalidArgument("unknown format '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Graph sources

struct FamilySpec {
  std::string family;  // bc | bk | disjoint-copies | cycle | path | complete | star | tree | gnp | bipartite | complete-bipartite
  unsigned k = 5;
  std::uint64_t p = 0;
  std::optional<unsigned> a;
  std::optional<std::uint64_t> b;
  std::string pattern = "C4";
  std::size_t count = 1;
  std::size_t n = 0;
  std::size_t n2 = 0;
  double prob = 0.5;
  std::uint64_t seed = 1;
};

struct GraphSource {
  std::optional<std::string> file;
  std::optional<FamilySpec> family;
};

struct BuiltGraph {
  Graph graph;
  std::string label;
  std::optional<LayeredGraph> layered;
};

inline DigitSet digit_set_for(const FamilySpec& f) {
  if (f.p == 0) throw InvalidArgument("--p is required for " + f.family);
  if (f.a.has_value() != f.b.has_value()) throw InvalidArgument("give both --a and --b, or neither");
  if (f.a) return digit_perm_set(*f.a, *f.b, f.p, f.k);
  const auto [a, b] = auto_params(f.p, f.k);
  return digit_perm_set(a, b, f.p, f.k);
}

inline BuiltGraph build_family(const FamilySpec& f) {
  namespace gen = generators;
  BuiltGraph out;
  const std::string& name = f.family;
  if (name == "bc" || name == "bk") {
    const DigitSet set = digit_set_for(f);
    LayeredGraph lg = name == "bc" ? build_bc(f.k, set) : build_bk(f.k, set);
    out.graph = lg.graph;
    out.label = name + "(" + std::to_string(f.k) + "," + std::to_string(f.p) + ";a=" + std::to_string(set.a) +
                ",b=" + std::to_string(set.b) + ")";
    out.layered = std::move(lg);
  } else if (name == "disjoint-copies") {
    out.graph = gen::disjoint_copies(patterns::parse(f.pattern), f.count);
    out.label = std::to_string(f.count) + "x" + f.pattern;
  } else if (name == "cycle") {
    out.graph = gen::cycle(f.n);
    out.label = "cycle(" + std::to_string(f.n) + ")";
  } else if (name == "path") {
    out.graph = gen::path(f.n);
    out.label = "path(" + std::to_string(f.n) + ")";
  } else if (name == "complete") {
    out.graph = gen::complete(f.n);
    out.label = "complete(" + std::to_string(f.n) + ")";
  } else if (name == "star") {
    out.graph = gen::star(f.n);
    out.label = "star(" + std::to_string(f.n) + ")";
  } else if (name == "tree") {
    out.graph = gen::random_tree(f.n, f.seed);
    out.label = "tree(" + std::to_string(f.n) + ",seed=" + std::to_string(f.seed) + ")";
  } else if (name == "gnp") {
    out.graph = gen::gnp(f.n, f.prob, f.seed);
    out.label = "gnp(" + std::to_string(f.n) + ")";
  } else if (name == "bipartite") {
    out.graph = gen::random_bipartite(f.n, f.n2, f.prob, f.seed);
    out.label = "bipartite(" + std::to_string(f.n) + "," + std::to_string(f.n2) + ")";
  } else if (name == "complete-bipartite") {
    out.graph = gen::complete_bipartite(f.n, f.n2);
    out.label = "complete-bipartite(" + std::to_string(f.n) + "," + std::to_string(f.n2) + ")";
  } else {
    throw InvalidArgument("unknown family '" + name + "'");
  }
  return out;
}

inline BuiltGraph load_graph(const GraphSource& src) {
  if (src.file.has_value() == src.family.has_value()) throw InvalidArgument("give exactly one of --graph or --family");
  if (src.family) return build_family(*src.family);
  std::ifstream in(*src.file);
  if (!in) throw InvalidArgument("cannot open graph file '" + *src.file + "'");
  return {read_edge_list(in), *src.file, std::nullopt};
}

// Pattern by name, or from an edge-list file when the name is a path.
inline Pattern load_pattern(const std::string& name) {
  try {
    return patterns::parse(name);
  } catch (const InvalidArgument&) {
    std::ifstream in(name);
    if (!in) throw;
    return pattern_traits(read_edge_list(in), name);
  }
}

// ---------------------------------------------------------------------------
// Testing

enum class TesterKind { Dfs, Bfs, Claw };

inline TesterKind parse_tester(std::string_view s) {
  if (s == "dfs") return TesterKind::Dfs;
  if (s == "bfs") return TesterKind::Bfs;
  if (s == "claw") return TesterKind::Claw;
  throw InvalidArgument("unknown tester '" + std::string(s) + "'");
}

inline const char* to_string(TesterKind t) {
  switch (t) {
    case TesterKind::Dfs: return "dfs";
    case TesterKind::Bfs: return "bfs";
    case TesterKind::Claw: return "claw";
  }
  return "?";
}

struct ExperimentSpec {
  GraphSource source;
  std::string pattern = "C4";
  TesterKind tester = TesterKind::Dfs;
  double eps = 0.5;
  std::optional<std::size_t> iterations;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  MatchMode mode = MatchMode::Subgraph;
  unsigned jobs = 1;
  bool early_stop = true;
  std::optional<std::string> transcript;  // .csv or .json
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Decision decision = Decision::Accept;
  std::size_t iterations_run = 0;
  std::uint64_t detections = 0;     // summed over iterations
  std::uint64_t detections_sq = 0;  // sum of squares of per-iteration counts
  unsigned max_message_bits = 0;
  std::size_t budget_violations = 0;
};

struct Summary {
  std::size_t trials = 0;
  std::size_t rejects = 0;
  double reject_freq = 0;
  double reject_stderr = 0;
  std::uint64_t iterations_run = 0;
  // Total detections over total iterations; stays unbiased under early
  // stopping because the stopping rule only looks at past iterations.
  double mean_detections = 0;
  double mean_detections_stderr = 0;
  unsigned max_message_bits = 0;
  std::size_t budget_violations = 0;
};

inline Summary summarize(const std::vector<TrialRecord>& trials) {
  Summary s;
  s.trials = trials.size();
  std::uint64_t det = 0;
  std::uint64_t det_sq = 0;
  for (const TrialRecord& t : trials) {
    s.rejects += t.decision == Decision::Reject ? 1 : 0;
    s.iterations_run += t.iterations_run;
    det += t.detections;
    det_sq += t.detections_sq;
    s.max_message_bits = std::max(s.max_message_bits, t.max_message_bits);
    s.budget_violations += t.budget_violations;
  }
  if (s.trials > 0) {
    s.reject_freq = static_cast<double>(s.rejects) / static_cast<double>(s.trials);
    s.reject_stderr = std::sqrt(s.reject_freq * (1 - s.reject_freq) / static_cast<double>(s.trials));
  }
  if (s.iterations_run > 0) {
    const double n = static_cast<double>(s.iterations_run);
    s.mean_detections = static_cast<double>(det) / n;
    if (s.iterations_run > 1) {
      const double var = (static_cast<double>(det_sq) - n * s.mean_detections * s.mean_detections) / (n - 1);
      s.mean_detections_stderr = std::sqrt(std::max(0.0, var) / n);
    }
  }
  return s;
}

inline std::size_t default_iterations(TesterKind tester, const Pattern& h, double eps) {
  switch (tester) {
    case TesterKind::Dfs: return dfs_iterations_for(eps, h.edge_count());
    case TesterKind::Bfs: return bfs_iterations_for(eps);
    case TesterKind::Claw: return 1;
  }
  return 1;
}

inline void check_eligibility(TesterKind tester, const Pattern& h, MatchMode mode) {
  switch (tester) {
    case TesterKind::Dfs:
      if (!h.hamiltonian_path) throw InvalidArgument("dfs tester needs a pattern with a Hamiltonian path");
      break;
    case TesterKind::Bfs:
      if (!h.universal_vertex || h.k() < 3) throw InvalidArgument("bfs tester needs a pattern with a universal vertex");
      break;
    case TesterKind::Claw:
      if (h.k() != 4 || h.edge_count() != 3 || !h.universal_vertex || mode != MatchMode::Subgraph) {
        throw InvalidArgument("claw tester only detects the claw as a subgraph");
      }
      break;
  }
}

// Runs one trial: a full test of `iterations` repetitions.
inline TrialRecord run_trial(const Graph& g, const Pattern& h, const ExperimentSpec& spec, std::size_t iterations,
                             std::size_t trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = derive_seed(spec.seed, trial);
  TestOptions options;
  options.stop_at_first_reject = spec.early_stop;
  TestResult r;
  switch (spec.tester) {
    case TesterKind::Dfs:
      r = dfs_test(g, DfsParams{h, spec.eps, iterations, spec.mode}, rec.seed, options);
      break;
    case TesterKind::Bfs:
      r = bfs_test(g, BfsParams{h, spec.eps, iterations, spec.mode}, rec.seed, options);
      break;
    case TesterKind::Claw: {
      Simulator<ClawProgram> sim(g, [](const NodeContext&) { return ClawProgram{}; });
      r = repeat_test(sim, 0, iterations, Budget{}, rec.seed, options);
      break;
    }
  }
  rec.decision = r.decision;
  rec.iterations_run = r.iterations_run;
  for (auto d : r.detections) {
    rec.detections += d;
    rec.detections_sq += static_cast<std::uint64_t>(d) * d;
  }
  rec.max_message_bits = r.max_message_bits;
  rec.budget_violations = r.budget_violations;
  return rec;
}

// Trials in parallel over `jobs` threads; results ordered by trial index.
inline std::vector<TrialRecord> run_trials(const Graph& g, const Pattern& h, const ExperimentSpec& spec,
                                           std::size_t iterations) {
  if (spec.trials < 1) throw InvalidArgument("trials must be >= 1");
  std::vector<TrialRecord> out(spec.trials);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(spec.jobs, spec.trials));
  if (workers == 1) {
    for (std::size_t t = 0; t < spec.trials; ++t) out[t] = run_trial(g, h, spec, iterations, t);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = w; t < spec.trials; t += workers) out[t] = run_trial(g, h, spec, iterations, t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// Detailed transcript of iteration 0 of trial 0, with `jobs` engine threads.
inline Transcript first_transcript(const Graph& g, const Pattern& h, const ExperimentSpec& spec) {
  RunOptions options;
  options.jobs = spec.jobs;
  options.detailed_transcript = true;
  const std::uint64_t seed = derive_seed(spec.seed, 0);
  switch (spec.tester) {
    case TesterKind::Dfs: {
      const auto f = dfs_program(h, spec.mode);
      Simulator<DfsProgram> sim(g, f);
      return sim.run(f.rounds(), f.budget(), seed, options);
    }
    case TesterKind::Bfs: {
      const auto f = bfs_program(h, spec.mode);
      Simulator<BfsProgram> sim(g, f);
      return sim.run(f.rounds(), f.budget(), seed, options);
    }
    case TesterKind::Claw: {
      Simulator<ClawProgram> sim(g, [](const NodeContext&) { return ClawProgram{}; });
      return sim.run(0, Budget{}, seed, options);
    }
  }
  return {};
}

inline void write_transcript_file(const std::string& path, const Transcript& t) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    write_transcript_csv(out, t);
  } else {
    out << transcript_json(t).dump(2) << '\n';
  }
}

struct TestOutcome {
  std::string graph_label;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t iterations = 0;
  std::vector<TrialRecord> trials;
  Summary summary;
};

inline TestOutcome run_experiment(const ExperimentSpec& spec) {
  const BuiltGraph built = load_graph(spec.source);
  const Pattern h = load_pattern(spec.pattern);
  check_eps(spec.eps);
  check_eligibility(spec.tester, h, spec.mode);
  TestOutcome out;
  out.graph_label = built.label;
  out.n = built.graph.node_count();
  out.m = built.graph.edge_count();
  out.iterations = spec.iterations.value_or(default_iterations(spec.tester, h, spec.eps));
  if (out.iterations < 1) throw InvalidArgument("iterations must be >= 1");
  out.trials = run_trials(built.graph, h, spec, out.iterations);
  out.summary = summarize(out.trials);
  if (spec.transcript) write_transcript_file(*spec.transcript, first_transcript(built.graph, h, spec));
  return out;
}

// ---------------------------------------------------------------------------
// Output

inline std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

inline const char* kTestCsvHeader =
    "tester,pattern,mode,graph,n,m,eps,iterations,trials,seed,early_stop,rejects,reject_freq,reject_stderr,"
    "iterations_run,mean_detections,mean_detections_stderr,max_message_bits,budget_violations";

inline std::string test_csv_row(const ExperimentSpec& spec, const TestOutcome& o) {
  const Summary& s = o.summary;
  std::ostringstream row;
  row << to_string(spec.tester) << ',' << spec.pattern << ',' << to_string(spec.mode) << ",\"" << o.graph_label
      << "\"," << o.n << ',' << o.m << ',' << fmt(spec.eps) << ',' << o.iterations << ',' << s.trials << ','
      << spec.seed << ',' << (spec.early_stop ? 1 : 0) << ',' << s.rejects << ',' << fmt(s.reject_freq) << ','
      << fmt(s.reject_stderr) << ',' << s.iterations_run << ',' << fmt(s.mean_detections) << ','
      << fmt(s.mean_detections_stderr) << ',' << s.max_message_bits << ',' << s.budget_violations;
  return row.str();
}

inline nlohmann::ordered_json summary_json(const Summary& s) {
  nlohmann::ordered_json j;
  j["trials"] = s.trials;
  j["rejects"] = s.rejects;
  j["reject_freq"] = s.reject_freq;
  j["reject_stderr"] = s.reject_stderr;
  j["iterations_run"] = s.iterations_run;
  j["mean_detections"] = s.mean_detections;
  j["mean_detections_stderr"] = s.mean_detections_stderr;
  j["max_message_bits"] = s.max_message_bits;
  j["budget_violations"] = s.budget_violations;
  return j;
}

inline nlohmann::ordered_json test_json(const ExperimentSpec& spec, const TestOutcome& o) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["tester"] = to_string(spec.tester);
  j["pattern"] = spec.pattern;
  j["mode"] = to_string(spec.mode);
  j["graph"] = o.graph_label;
  j["n"] = o.n;
  j["m"] = o.m;
  j["eps"] = spec.eps;
  j["iterations"] = o.iterations;
  j["seed"] = spec.seed;
  j["early_stop"] = spec.early_stop;
  j["summary"] = summary_json(o.summary);
  auto trials = nlohmann::ordered_json::array();
  for (const TrialRecord& t : o.trials) {
    trials.push_back({{"trial", t.trial},
                      {"seed", t.seed},
                      {"decision", hfree::to_string(t.decision)},
                      {"iterations_run", t.iterations_run},
                      {"detections", t.detections},
                      {"max_message_bits", t.max_message_bits},
                      {"budget_violations", t.budget_violations}});
  }
  j["trials"] = std::move(trials);
  return j;
}

struct Io {
  std::ostream& out;
  std::ostream& err;
};

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const WorkCapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kWorkCap;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  } catch (const std::logic_error& e) {
    err << "error: bad number (" << e.what() << ")\n";
    return kInvalidParameters;
  }
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Wall time goes to stderr so that stdout is a pure function of the flags.
inline int cmd_test(const ExperimentSpec& spec, Format format, Io io) {
  return guarded(io.err, [&] {
    const Stopwatch clock;
    const TestOutcome o = run_experiment(spec);
    if (format == Format::Csv) {
      io.out << "# schema=1\n" << kTestCsvHeader << '\n' << test_csv_row(spec, o) << '\n';
    } else {
      io.out << test_json(spec, o).dump(2) << '\n';
    }
    io.err << "wall_time_s=" << fmt(clock.seconds()) << '\n';
    if (o.summary.budget_violations > 0) io.err << "warning: " << o.summary.budget_violations << " budget violations\n";
    return static_cast<int>(kOk);
  });
}

enum class SweepAxis { P, Eps, Iterations, Trials };

inline SweepAxis parse_axis(std::string_view s) {
  if (s == "p") return SweepAxis::P;
  if (s == "eps") return SweepAxis::Eps;
  if (s == "iterations") return SweepAxis::Iterations;
  if (s == "trials") return SweepAxis::Trials;
  throw InvalidArgument("unknown sweep axis '" + std::string(s) + "'");
}

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::P: return "p";
    case SweepAxis::Eps: return "eps";
    case SweepAxis::Iterations: return "iterations";
    case SweepAxis::Trials: return "trials";
  }
  return "?";
}

// One experiment per axis value. Sweeping p keeps the digit parameters of the
// base spec only when they are valid for every p; otherwise each p gets its
// own auto-selected (a, b).
inline int cmd_sweep(const ExperimentSpec& base, SweepAxis axis, const std::vector<std::string>& values,
                     Format format, Io io) {
  return guarded(io.err, [&] {
    if (values.empty()) throw InvalidArgument("sweep needs at least one value");
    const Stopwatch clock;
    std::vector<std::pair<ExperimentSpec, TestOutcome>> rows;
    for (const std::string& v : values) {
      ExperimentSpec spec = base;
      switch (axis) {
        case SweepAxis::P:
          if (!spec.source.family) throw InvalidArgument("sweeping p needs --family bc|bk");
          spec.source.family->p = std::stoull(v);
          spec.source.family->a.reset();
          spec.source.family->b.reset();
          break;
        case SweepAxis::Eps: spec.eps = std::stod(v); break;
        case SweepAxis::Iterations: spec.iterations = std::stoull(v); break;
        case SweepAxis::Trials: spec.trials = std::stoull(v); break;
      }
      spec.transcript.reset();
      rows.emplace_back(spec, run_experiment(spec));
    }
    if (format == Format::Csv) {
      io.out << "# schema=1\naxis,value," << kTestCsvHeader << '\n';
      for (std::size_t i = 0; i < rows.size(); ++i) {
        io.out << to_string(axis) << ',' << values[i] << ',' << test_csv_row(rows[i].first, rows[i].second) << '\n';
      }
    } else {
      nlohmann::ordered_json j;
      j["schema"] = 1;
      j["axis"] = to_string(axis);
      auto points = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        auto p = test_json(rows[i].first, rows[i].second);
        p.erase("trials");
        p["value"] = values[i];
        points.push_back(std::move(p));
      }
      j["points"] = std::move(points);
      io.out << j.dump(2) << '\n';
    }
    io.err << "wall_time_s=" << fmt(clock.seconds()) << '\n';
    return static_cast<int>(kOk);
  });
}

// ---------------------------------------------------------------------------
// generate

// Writes the edge list to `out_path` (stdout when empty) plus, for
// constructions, a JSON sidecar at out_path + ".json". A one-line summary
// goes to stdout when writing to a file, to stderr otherwise.
inline int cmd_generate(const FamilySpec& f, const std::string& out_path, Io io) {
  return guarded(io.err, [&] {
    const BuiltGraph b = build_family(f);
    std::ostringstream summary;
    summary << "n=" << b.graph.node_count() << " m=" << b.graph.edge_count()
            << " max_degree=" << b.graph.max_degree();
    if (b.layered) summary << " planted=" << b.layered->planted.size();
    if (out_path.empty()) {
      write_edge_list(io.out, b.graph);
      io.err << summary.str() << '\n';
    } else {
      std::ofstream file(out_path);
      if (!file) throw InvalidArgument("cannot write '" + out_path + "'");
      write_edge_list(file, b.graph);
      if (b.layered) {
        std::ofstream side(out_path + ".json");
        side << sidecar(*b.layered).dump(2) << '\n';
      }
      io.out << summary.str() << '\n';
    }
    return static_cast<int>(kOk);
  });
}

// ---------------------------------------------------------------------------
// verify

struct VerifySpec {
  std::string target;  // digitset | sumset | bc | bk
  unsigned k = 5;
  std::uint64_t p = 0;
  std::optional<unsigned> a;
  std::optional<std::uint64_t> b;
  std::vector<std::uint64_t> X;  // sumset only
};

struct CheckLine {
  std::string name;
  bool ok;
  std::string detail;
};

inline std::vector<CheckLine> verify_layered(const LayeredGraph& lg) {
  std::vector<CheckLine> lines;
  const Graph& g = lg.graph;
  const std::size_t pp = lg.p * lg.digit_set.X.size();
  const std::size_t k = lg.k;
  lines.push_back({"sum_property", verify_sum_property(lg.digit_set.X, lg.p, lg.k), ""});
  lines.push_back({"node_count", g.node_count() == k * lg.p, std::to_string(g.node_count())});
  const std::size_t expected_m = lg.kind == LayeredKind::Cycle ? k * pp : k * (k - 1) / 2 * pp;
  lines.push_back({"edge_count", g.edge_count() == expected_m, std::to_string(g.edge_count())});
  const std::size_t deg = lg.kind == LayeredKind::Cycle ? 2 * lg.digit_set.X.size() : (k - 1) * lg.digit_set.X.size();
  bool regular = true;
  for (Vertex v = 0; v < g.node_count(); ++v) regular = regular && g.degree(v) == deg;
  lines.push_back({"regular", regular, "degree " + std::to_string(deg)});

  const Pattern h = lg.kind == LayeredKind::Cycle ? patterns::cycle(k) : patterns::clique(k);
  const CopyFamily all = enumerate_copies(g, h, MatchMode::Subgraph);
  std::vector<std::vector<Vertex>> planted;
  for (auto nodes : lg.planted) {
    std::sort(nodes.begin(), nodes.end());
    planted.push_back(std::move(nodes));
  }
  std::sort(planted.begin(), planted.end());
  std::vector<std::vector<Vertex>> found;
  for (const Copy& c : all.copies) found.push_back(c.nodes);
  lines.push_back({"census_equals_planted", found == planted,
                   std::to_string(found.size()) + " copies, " + std::to_string(planted.size()) + " planted"});

  std::unordered_set<std::uint64_t> used;
  bool disjoint = true;
  for (const auto& nodes : lg.planted) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (!g.has_edge(nodes[i], nodes[j])) continue;
        if (lg.kind == LayeredKind::Cycle && !(j == i + 1 || (i == 0 && j == k - 1))) continue;
        disjoint = used.insert(detail::edge_key(nodes[i], nodes[j])).second && disjoint;
      }
    }
  }
  lines.push_back({"planted_edge_disjoint", disjoint, ""});
  bool layers = true;
  for (const auto& nodes : lg.planted) {
    for (std::size_t l = 0; l < k; ++l) layers = layers && nodes[l] / lg.p == l;
  }
  lines.push_back({"one_vertex_per_layer", layers, ""});
  return lines;
}

inline int cmd_verify(const VerifySpec& spec, Format format, Io io) {
  return guarded(io.err, [&] {
    std::vector<CheckLine> lines;
    if (spec.target == "sumset") {
      if (spec.p < 2) throw InvalidArgument("--p is required");
      lines.push_back({"sum_property", verify_sum_property(spec.X, spec.p, spec.k), ""});
    } else if (spec.target == "digitset" || spec.target == "bc" || spec.target == "bk") {
      FamilySpec f;
      f.family = spec.target;
      f.k = spec.k;
      f.p = spec.p;
      f.a = spec.a;
      f.b = spec.b;
      const DigitSet set = digit_set_for(f);
      if (spec.target == "digitset") {
        lines.push_back({"size_is_a_factorial", set.X.size() == static_cast<std::size_t>(std::tgamma(set.a + 1) + 0.5),
                         std::to_string(set.X.size())});
        lines.push_back({"sum_property", verify_sum_property(set.X, set.p, set.k), ""});
      } else {
        lines = verify_layered(spec.target == "bc" ? build_bc(spec.k, set) : build_bk(spec.k, set));
      }
    } else {
      throw InvalidArgument("unknown verify target '" + spec.target + "'");
    }
    bool all = true;
    for (const auto& l : lines) all = all && l.ok;
    if (format == Format::Csv) {
      io.out << "# schema=1\ncheck,result,detail\n";
      for (const auto& l : lines) io.out << l.name << ',' << (l.ok ? "pass" : "fail") << ",\"" << l.detail << "\"\n";
    } else {
      nlohmann::ordered_json j;
      j["schema"] = 1;
      j["target"] = spec.target;
      j["pass"] = all;
      auto checks = nlohmann::ordered_json::array();
      for (const auto& l : lines) checks.push_back({{"check", l.name}, {"pass", l.ok}, {"detail", l.detail}});
      j["checks"] = std::move(checks);
      io.out << j.dump(2) << '\n';
    }
    return static_cast<int>(all ? kOk : kVerificationFailed);
  });
}

// ---------------------------------------------------------------------------
// diagnostics

inline nlohmann::ordered_json diagnostics_json(const Diagnostics& d) {
  auto opt = [](const auto& v) -> nlohmann::ordered_json {
    if (v) return *v;
    return nullptr;
  };
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["n"] = d.n;
  j["m"] = d.m;
  j["pattern_edges"] = d.pattern_edges;
  j["eps"] = d.eps;
  j["copies"] = d.copies;
  j["eps_far_evidence"] = d.eps_far_evidence;
  j["important_edges"] = opt(d.important_edges);
  j["good_edges"] = d.good_edges;
  j["important_good_edges"] = opt(d.important_good_edges);
  j["good_vertices"] = d.good_vertices;
  j["bad_vertex_copy_sum"] = d.bad_vertex_copy_sum;
  j["dfs_lower_bound"] = opt(d.dfs_lower_bound);
  j["bfs_lower_bound"] = d.bfs_lower_bound;
  j["good_edge_bound_holds"] = opt(d.good_edge_bound_holds);
  j["important_good_bound_holds"] = opt(d.important_good_bound_holds);
  j["bad_vertex_bound_holds"] = opt(d.bad_vertex_bound_holds);
  j["c"] = d.c;
  return j;
}

inline int cmd_diagnostics(const GraphSource& source, const std::string& pattern, double eps, Format format, Io io) {
  return guarded(io.err, [&] {
    const BuiltGraph b = load_graph(source);
    const Diagnostics d = compute_diagnostics(b.graph, load_pattern(pattern), eps);
    if (format == Format::Json) {
      io.out << diagnostics_json(d).dump(2) << '\n';
    } else {
      auto opt = [](const auto& v) -> std::string {
        if (!v) return "";
        std::ostringstream s;
        s << std::boolalpha << std::setprecision(10) << *v;
        return s.str();
      };
      io.out << "# schema=1\n"
             << "n,m,pattern_edges,eps,copies,eps_far_evidence,important_edges,good_edges,important_good_edges,"
                "good_vertices,bad_vertex_copy_sum,dfs_lower_bound,bfs_lower_bound,good_edge_bound_holds,"
                "important_good_bound_holds,bad_vertex_bound_holds\n"
             << d.n << ',' << d.m << ',' << d.pattern_edges << ',' << fmt(d.eps) << ',' << d.copies << ','
             << (d.eps_far_evidence ? "true" : "false") << ',' << opt(d.important_edges) << ',' << d.good_edges << ','
             << opt(d.important_good_edges) << ',' << d.good_vertices << ',' << d.bad_vertex_copy_sum << ','
             << opt(d.dfs_lower_bound) << ',' << fmt(d.bfs_lower_bound) << ',' << opt(d.good_edge_bound_holds) << ','
             << opt(d.important_good_bound_holds) << ',' << opt(d.bad_vertex_bound_holds) << '\n';
    }
    bool ok = true;
    for (const auto& check : {d.good_edge_bound_holds, d.important_good_bound_holds, d.bad_vertex_bound_holds}) {
      ok = ok && check.value_or(true);
    }
    return static_cast<int>(ok ? kOk : kVerificationFailed);
  });
}

}  // namespace hfree::xcli
