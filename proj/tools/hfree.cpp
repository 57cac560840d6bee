// hfree: generate graphs, run the H-freeness testers, sweep parameters,
// verify constructions and print proof diagnostics.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hfree/xcli.hpp"

namespace {

using namespace hfree;
using namespace hfree::xcli;

struct FamilyFlags {
  std::string family;
  FamilySpec spec;
  std::string copies_pattern;
  unsigned a = 0;
  std::uint64_t b = 0;

  // `copies_flag` names the option giving the pattern for disjoint-copies.
  void add(CLI::App* cmd, const std::string& copies_flag) {
    cmd->add_option("--k", spec.k, "pattern size for bc/bk");
    cmd->add_option("--p", spec.p, "prime modulus for bc/bk");
    cmd->add_option("--a", a, "digit count (default: largest valid)");
    cmd->add_option("--b", b, "digit base");
    cmd->add_option(copies_flag, copies_pattern, "pattern for disjoint-copies");
    cmd->add_option("--count", spec.count, "copies for disjoint-copies");
    cmd->add_option("--n", spec.n, "node count (side A for bipartite families)");
    cmd->add_option("--n2", spec.n2, "side B for bipartite families");
    cmd->add_option("--prob", spec.prob, "edge probability for gnp/bipartite");
    cmd->add_option("--graph-seed", spec.seed, "seed for random families");
  }

  FamilySpec resolve(const std::string& fallback_pattern = "C4") const {
    FamilySpec f = spec;
    f.family = family;
    f.pattern = copies_pattern.empty() ? fallback_pattern : copies_pattern;
    if (a != 0 || b != 0) {
      f.a = a;
      f.b = b;
    }
    return f;
  }
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct TestFlags {
  std::string graph;
  FamilyFlags family;
  std::string pattern = "C4";
  std::string tester = "dfs";
  std::string mode = "subgraph";
  double eps = 0.5;
  std::size_t iterations = 0;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  bool no_early_stop = false;
  std::string transcript;

  void add(CLI::App* cmd) {
    cmd->add_option("--graph", graph, "edge-list file");
    cmd->add_option("--family", family.family, "synthetic family or construction");
    family.add(cmd, "--copies-of");
    cmd->add_option("--pattern", pattern, "C<k>, K<k>, P<k>, claw, K1,<l> or an edge-list file");
    cmd->add_option("--tester", tester, "dfs | bfs | claw");
    cmd->add_option("--mode", mode, "subgraph | induced");
    cmd->add_option("--eps", eps, "distance parameter in (0, 1]");
    cmd->add_option("--iterations", iterations, "repetitions per test (default from eps)");
    cmd->add_option("--trials", trials, "independent tests");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--jobs", jobs, "worker threads");
    cmd->add_flag("--no-early-stop", no_early_stop, "run all iterations even after a reject");
    cmd->add_option("--transcript", transcript, "write the first iteration's transcript (.json or .csv)");
  }

  ExperimentSpec resolve() const {
    ExperimentSpec s;
    if (!graph.empty()) s.source.file = graph;
    if (!family.family.empty()) s.source.family = family.resolve(pattern);
    s.pattern = pattern;
    s.tester = parse_tester(tester);
    s.mode = parse_match_mode(mode);
    s.eps = eps;
    if (iterations > 0) s.iterations = iterations;
    s.trials = trials;
    s.seed = seed;
    s.jobs = jobs;
    s.early_stop = !no_early_stop;
    if (!transcript.empty()) s.transcript = transcript;
    return s;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed H-freeness testers in a simulated CONGEST network"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "csv";
  std::string out_path;
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "output file (default stdout)");

  auto* gen = app.add_subcommand("generate", "write a graph as an edge list");
  FamilyFlags gen_flags;
  gen->add_option("family", gen_flags.family, "bc | bk | disjoint-copies | cycle | path | complete | star | tree | gnp | "
                                              "bipartite | complete-bipartite")
      ->required();
  gen_flags.add(gen, "--pattern");

  auto* test = app.add_subcommand("test", "run a tester over independent trials");
  TestFlags test_flags;
  test_flags.add(test);

  auto* sweep = app.add_subcommand("sweep", "repeat `test` along one parameter axis");
  TestFlags sweep_flags;
  sweep_flags.add(sweep);
  std::string axis;
  std::string values;
  sweep->add_option("--axis", axis, "p | eps | iterations | trials")->required();
  sweep->add_option("--values", values, "comma-separated axis values")->required();

  auto* verify = app.add_subcommand("verify", "exhaustively check a digit set or construction");
  VerifySpec verify_spec;
  unsigned va = 0;
  std::uint64_t vb = 0;
  std::string vx;
  verify->add_option("target", verify_spec.target, "digitset | sumset | bc | bk")->required();
  verify->add_option("--k", verify_spec.k, "summand count / pattern size");
  verify->add_option("--p", verify_spec.p, "modulus");
  verify->add_option("--a", va, "digit count");
  verify->add_option("--b", vb, "digit base");
  verify->add_option("--X", vx, "comma-separated set (sumset)");

  auto* diag = app.add_subcommand("diagnostics", "counts from the detection lower-bound argument");
  std::string diag_graph;
  FamilyFlags diag_family;
  std::string diag_pattern = "C4";
  double diag_eps = 0.5;
  diag->add_option("--graph", diag_graph, "edge-list file");
  diag->add_option("--family", diag_family.family, "synthetic family or construction");
  diag_family.add(diag, "--copies-of");
  diag->add_option("--pattern", diag_pattern, "pattern name or edge-list file");
  diag->add_option("--eps", diag_eps, "distance parameter in (0, 1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalidParameters;
  }

  std::ofstream file;
  if (!out_path.empty() && !gen->parsed()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kInvalidParameters;
    }
  }
  std::ostream& out = file.is_open() ? static_cast<std::ostream&>(file) : std::cout;
  const Io io{out, std::cerr};

  return guarded(std::cerr, [&]() -> int {
    const Format fmt_choice = parse_format(format);
    if (gen->parsed()) {
      return cmd_generate(gen_flags.resolve(), out_path, Io{std::cout, std::cerr});
    }
    if (test->parsed()) return cmd_test(test_flags.resolve(), fmt_choice, io);
    if (sweep->parsed()) return cmd_sweep(sweep_flags.resolve(), parse_axis(axis), split(values), fmt_choice, io);
    if (verify->parsed()) {
      if (va != 0 || vb != 0) {
        verify_spec.a = va;
        verify_spec.b = vb;
      }
      for (const auto& x : split(vx)) verify_spec.X.push_back(std::stoull(x));
      return cmd_verify(verify_spec, fmt_choice, io);
    }
    GraphSource src;
    if (!diag_graph.empty()) src.file = diag_graph;
    if (!diag_family.family.empty()) src.family = diag_family.resolve(diag_pattern);
    return cmd_diagnostics(src, diag_pattern, diag_eps, fmt_choice, io);
  });
}
