// submx: submatrix detection toolkit
//
// Subcommands: pc-gen, reduce, detect, estimate, sweep, verify, demo.
// Exit codes: 0 success, 2 bound violation in `verify`, 3 scan budget
// exhaustion, 1 any other error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>

#include "submx/detectors.hpp"
#include "submx/estimators.hpp"
#include "submx/io.hpp"
#include "submx/model.hpp"
#include "submx/oracles.hpp"
#include "submx/parallel.hpp"
#include "submx/plantedclique.hpp"
#include "submx/reduction.hpp"
#include "submx/sweep.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace submx;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 1;
  unsigned threads = default_threads();
  std::string out_dir = ".";
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / name).string();
}

unsigned parse_auto(const std::string& s, const char* what) {
  if (s == "auto") return UINT32_MAX;
  try {
    return static_cast<unsigned>(std::stoul(s));
  } catch (...) {
    throw CLI::ValidationError(std::string(what) + " must be 'auto' or an integer");
  }
}

std::vector<std::uint32_t> parse_index_list(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
  return out;
}

AdjacencyMatrix load_graph(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  char head[4] = {0, 0, 0, 0};
  probe.read(head, 4);
  if (probe && head[0] == 'S' && head[1] == 'M' && head[2] == 'G')
    return read_graph_bin(path);
  return read_edgelist(path);
}

int cmd_pc_gen(const GlobalOpts& g, std::size_t n, std::size_t kappa,
               const std::string& format, std::string out) {
  AdjacencyMatrix a = kappa > 0 ? sample_planted(n, kappa, g.seed) : sample_er(n, g.seed);
  if (out.empty())
    out = out_path(g, "graph_" + std::to_string(n) + "_" + std::to_string(kappa) +
                          (format == "bin" ? ".smg" : ".txt"));
  if (format == "bin")
    write_graph_bin(out, a);
  else
    write_edgelist(out, a);
  ordered_json j{{"n", n},
                 {"kappa", kappa},
                 {"edges", a.edge_count()},
                 {"seed", g.seed},
                 {"file", out}};
  if (!a.planted().empty()) j["planted"] = a.planted();
  std::cout << j.dump(2) << "\n";
  return 0;
}

ordered_json params_json(const ReductionParams& p) {
  return ordered_json{{"p", p.dim},
                      {"k", p.block},
                      {"lambda", p.signal},
                      {"kappa", p.clique},
                      {"ell", p.copies},
                      {"n", p.graph_n},
                      {"n2", p.half_n},
                      {"m", p.trunc},
                      {"mu", p.shift},
                      {"t", p.out_scale},
                      {"w", p.in_scale},
                      {"mass_bits", p.mass_bits},
                      {"dim_precondition_ok", p.dim_ok},
                      {"signal_admissible", p.signal_ok},
                      {"in_scale_tv_ok", p.in_scale_ok}};
}

int cmd_reduce(const GlobalOpts& g, const std::string& graph_path, std::size_t p,
               std::size_t k, double lambda, const std::string& t_arg,
               const std::string& w_arg, const std::string& mode, std::string out,
               std::string cert) {
  const AdjacencyMatrix a = load_graph(graph_path);
  const std::size_t n = a.size();
  if (n % (2 * p) != 0)
    throw std::invalid_argument("reduce: graph size N=" + std::to_string(n) +
                                " is not 2*p*ell for p=" + std::to_string(p));
  const std::size_t ell = n / (2 * p);
  const unsigned t_in = parse_auto(t_arg, "--t");
  const unsigned w_in = parse_auto(w_arg, "--w");
  const unsigned t = t_in == UINT32_MAX ? default_out_scale(p) : t_in;
  unsigned w = w_in == UINT32_MAX ? default_in_scale(p) : w_in;
  w = std::max(w, t);
  const ReductionParams params = assemble_params(p, k, lambda, ell, t, w);

  if (out.empty()) out = out_path(g, "reduced.smx");
  ordered_json j;
  j["params"] = params_json(params);
  j["mode"] = mode;
  const BudgetForecast forecast = bit_budget(params);
  if (mode == "continuous") {
    const DataMatrix x = reduce_continuous(a.lower_left_quarter(), params, g.seed,
                                           g.threads);
    write_matrix(out, x, g.seed);
  } else {
    CoinLedger ledger;
    CounterCoins coins(g.seed);
    const QuantizedMatrix x = reduce_discrete(a.lower_left_quarter(), params, coins,
                                              &ledger, g.threads);
    write_matrix(out, x, g.seed);
    j["table_mode"] = table_mode_feasible(params);
    j["ledger"] = {{"total", ledger.total},
                   {"phase0", ledger.phase0},
                   {"phase1", ledger.phase1}};
  }
  j["forecast"] = {{"random_bits", forecast.random_bits},
                   {"ops_estimate", forecast.ops_estimate}};
  j["file"] = out;
  const std::string text = j.dump(2);
  if (!cert.empty()) write_text(cert, text + "\n");
  std::cout << text << "\n";
  return 0;
}

int cmd_detect(const std::string& input, const std::string& test, std::size_t k,
               double c, double lambda, std::uint64_t budget,
               const std::string& rows_arg, const std::string& cols_arg,
               unsigned threads) {
  const MatrixFile f = read_matrix(input);
  const DataMatrix x = f.as_real();
  const std::size_t p = x.rows();
  const TestThresholds th = detection_thresholds(p, k, lambda, c);

  ordered_json j{{"test", test}, {"p", p}, {"k", k}, {"c", c}};
  double stat = 0.0, threshold = 0.0;
  if (test == "lin") {
    stat = linear_stat(x);
    threshold = th.lin;
    j["lambda"] = lambda;
  } else if (test == "max") {
    stat = max_stat(x);
    threshold = th.max;
  } else if (test == "scan") {
    const ScanResult r = scan_stat(x, k, budget, threads);
    stat = r.stat;
    threshold = th.scan;
    j["argmax_rows"] = r.rows;
    j["argmax_cols"] = r.cols;
  } else if (test == "support") {
    const auto rows = parse_index_list(rows_arg);
    const auto cols = parse_index_list(cols_arg);
    if (rows.size() != k || cols.size() != k)
      throw std::invalid_argument("detect --test support: --rows/--cols must list k indices");
    const TestOutcome o = support_recovery_test(x, rows, cols, th.scan);
    stat = o.statistic;
    threshold = o.threshold;
  } else {
    throw std::invalid_argument("detect: unknown test " + test);
  }
  j["statistic"] = stat;
  j["threshold"] = threshold;
  j["reject"] = stat > threshold;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_estimate(const GlobalOpts& g, std::size_t p, std::size_t k, double q,
                 double level, double signal, std::uint64_t trials) {
  if (level < 0.0) level = default_threshold_level(p);
  if (signal < 0.0) signal = level;
  std::vector<std::uint32_t> support(k);
  for (std::size_t i = 0; i < k; ++i) support[i] = static_cast<std::uint32_t>(i + 1);
  const MeanMatrixSpec theta = make_mean_matrix(p, support, support, signal);
  const std::size_t kk = k;
  const double lv = level;
  const MeanEstimate risk = estimation_risk(
      [kk, lv](const DataMatrix& x) { return threshold_project(x, lv, kk); }, theta,
      q, trials, g.seed, g.threads);
  const double rate = schatten_rate(p, k, q);
  ordered_json j{{"p", p},
                 {"k", k},
                 {"q", std::isinf(q) ? -1.0 : q},
                 {"threshold", level},
                 {"signal", signal},
                 {"trials", trials},
                 {"risk_mean", risk.mean},
                 {"risk_ci", {risk.ci_low, risk.ci_high}},
                 {"rate", rate},
                 {"risk_over_rate", risk.mean / rate}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const GlobalOpts& g, const std::string& config_path) {
  SweepConfig cfg = load_sweep_config(config_path);
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  const SweepReport rep = run_sweep(cfg);
  write_text(out_path(g, "sweep.csv"), rep.csv());
  write_text(out_path(g, "sweep.json"), rep.to_json_string() + "\n");
  write_text(out_path(g, "phase_diagram.svg"), phase_diagram_svg(rep));
  std::size_t skipped = 0;
  for (const auto& cell : rep.cells) skipped += cell.budget_skipped ? 1 : 0;
  std::cout << "sweep: " << rep.cells.size() << " cells (" << skipped
            << " budget-skipped) -> " << g.out_dir << "\n";
  return 0;
}

int cmd_demo(const GlobalOpts& g, std::size_t p, std::size_t k, double lambda,
             std::uint64_t reps, const std::string& t_arg, const std::string& w_arg,
             bool strict) {
  DemoConfig cfg;
  cfg.p = p;
  cfg.k = k;
  cfg.lambda = lambda;
  cfg.reps = reps;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  cfg.strict = strict;
  const unsigned t_in = parse_auto(t_arg, "--t");
  const unsigned w_in = parse_auto(w_arg, "--w");
  if (t_in != UINT32_MAX) cfg.t = static_cast<int>(t_in);
  if (w_in != UINT32_MAX) cfg.w = static_cast<int>(w_in);
  const DemoReport rep = run_reduction_demo(cfg);
  std::cout << rep.to_json_string() << "\n";
  return 0;
}

// verify: the fast analytic-bound suite. Every check recomputes both sides
// independently; exit code 2 when any bound fails.
int cmd_verify(const GlobalOpts& g, const std::string& out_file) {
  ordered_json checks = ordered_json::array();
  bool all_ok = true;
  auto record = [&](const std::string& name, bool ok, ordered_json detail) {
    detail["name"] = name;
    detail["pass"] = ok;
    checks.push_back(detail);
    all_ok = all_ok && ok;
  };

  // truncation TV facts vs their exponential bounds, across the parameter
  // selection at several dimensions and admissible signals
  {
    bool ok = true;
    double worst = 0.0;
    for (std::size_t p : {8, 16, 32, 64}) {
      const double cap = max_admissible_signal(p);
      for (double frac : {1.0, 0.5, 0.1, 0.01}) {
        const std::size_t ell = choose_copies(p, cap * frac);
        const auto params = assemble_params(p, 1, cap * frac, ell, 1, 1);
        const TruncatedPairSpec s = params.pair();
        const double lhs1 = tv_shifted_closed_form(s);
        const double rhs1 = tv_shifted_bound(s);
        const double lhs2 = tv_mixture_closed_form(s);
        const double rhs2 = tv_mixture_bound(s);
        ok = ok && lhs1 <= rhs1 && lhs2 <= rhs2;
        worst = std::max(worst, std::max(lhs1 / rhs1, lhs2 / rhs2));
      }
    }
    record("truncation_tv_exponential_bounds", ok, {{"worst_ratio", worst}});
  }

  // mixture identity on a dense grid
  {
    double worst = 0.0;
    for (double m : {3.0, 4.0, 5.0}) {
      const TruncatedPairSpec s = TruncatedPairSpec::create(m, 1.0 / (2.0 * m));
      for (int i = 0; i <= 100000; ++i) {
        const double x = -(m + 1.0) + i * (2.0 * (m + 1.0) / 100000.0);
        const double lhs = 0.5 * (s.density0(x) + s.density1(x));
        worst = std::max(worst, std::fabs(lhs - s.mixture_density(x)));
      }
    }
    record("mixture_identity", worst <= 1e-12, {{"max_abs_gap", worst}});
  }

  // product TV bound on random two-factor products
  {
    SplitMix rng(key_hash(g.seed, 0x7e57));
    bool ok = true;
    for (int it = 0; it < 1000 && ok; ++it) {
      auto rand_dist = [&](std::size_t atoms) {
        DiscreteDist d;
        double tot = 0.0;
        for (std::size_t i = 0; i < atoms; ++i) {
          d.atoms.push_back(static_cast<double>(i));
          d.masses.push_back(rng.uniform() + 1e-3);
          tot += d.masses.back();
        }
        for (auto& mss : d.masses) mss /= tot;
        return d;
      };
      const std::size_t n1 = 2 + rng.below(7), n2 = 2 + rng.below(7);
      const DiscreteDist p1 = rand_dist(n1), q1 = rand_dist(n1);
      const DiscreteDist p2 = rand_dist(n2), q2 = rand_dist(n2);
      double lhs = 0.0;
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
          lhs += std::fabs(p1.masses[i] * p2.masses[j] - q1.masses[i] * q2.masses[j]);
      lhs *= 0.5;
      const double rhs = tv_discrete(p1, q1) + tv_discrete(p2, q2);
      ok = lhs <= rhs + 1e-12;
    }
    record("product_tv_bound", ok, {{"instances", 1000}});
  }

  // folded-support event probability vs its analytic bound
  {
    bool ok = true;
    ordered_json detail;
    for (auto [k, p] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 40}, {2, 80}}) {
      const std::size_t kappa = 20 * k, n = 2 * p;
      std::uint64_t fails = 0;
      const std::uint64_t trials = 20000;
      for (std::uint64_t tr = 0; tr < trials; ++tr) {
        const AdjacencyMatrix a = sample_planted(n, kappa, key_hash(g.seed, 0xec, tr));
        const FoldReport fr = fold_report(a.planted(), n, p, k);
        fails += fr.event ? 0 : 1;
      }
      const MCEstimate est = wilson_estimate(fails, trials);
      const double bound = event_failure_bound(k, p);
      ok = ok && est.point <= bound + 3.0 * est.se();
      detail["k" + std::to_string(k)] = {{"rate", est.point}, {"bound", bound}};
    }
    record("event_failure_bound", ok, detail);
  }

  // optimized scan equals brute force on random instances
  {
    SplitMix rng(key_hash(g.seed, 0x5ca9));
    bool ok = true;
    for (int it = 0; it < 100 && ok; ++it) {
      DataMatrix x(6, 6);
      for (double& v : x.data()) v = rng.normal();
      const ScanResult fast = scan_stat(x, 2);
      double best = -HUGE_VAL;
      for (std::uint32_t a = 0; a < 6; ++a)
        for (std::uint32_t b = a + 1; b < 6; ++b)
          for (std::uint32_t s = 0; s < 6; ++s)
            for (std::uint32_t t2 = s + 1; t2 < 6; ++t2) {
              // row partial sums first, matching the statistic's contract
              const double sum =
                  (x.at(s, a) + x.at(s, b)) + (x.at(t2, a) + x.at(t2, b));
              if (sum > best) best = sum;
            }
      ok = fast.stat == best / 2.0;
    }
    record("scan_equals_bruteforce", ok, {{"instances", 100}});
  }

  // empirical lin error under the analytic bound at p=50, k=10, lambda=2
  {
    const std::size_t p = 50, k = 10;
    const double lambda = 2.0;
    const TestThresholds th = detection_thresholds(p, k, lambda, 1.0);
    const ErrorBoundReport eb = error_bounds(p, k, lambda, 1.0);
    const std::uint64_t trials = 2000;
    const std::uint64_t cell_seed = key_hash(g.seed, 0x11f);
    const ErrorRates rates = mc_error(
        [&](std::uint64_t tr) {
          return sweep_trial_reject("lin", p, k, lambda, false, th,
                                    kDefaultScanBudget, cell_seed, 2 * tr);
        },
        [&](std::uint64_t tr) {
          return sweep_trial_reject("lin", p, k, lambda, true, th,
                                    kDefaultScanBudget, cell_seed, 2 * tr + 1);
        },
        trials, g.threads);
    const bool ok = rates.total() <= eb.bound_lin + 3.0 * rates.total_se();
    record("lin_error_bound", ok,
           {{"empirical", rates.total()}, {"bound", eb.bound_lin}});
  }

  // dyadic approximation TV against the exactly quantized density
  {
    const TruncatedPairSpec s = TruncatedPairSpec::create(4.0, 0.125);
    const unsigned w = 8;
    const unsigned T = mass_bits_for(s.trunc, w, 16);
    const DyadicDist q1 = DyadicDist::table(DyadicDist::Kind::Shifted, s, w, T);
    const auto ext = q1.extract();
    DiscreteDist qd{ext.atoms, ext.masses};
    DiscreteDist exact;
    exact.atoms = ext.atoms;
    double prev = 0.0;
    for (std::size_t i = 1; i <= q1.atom_count(); ++i) {
      const double edge = i == q1.atom_count()
                              ? 1.0
                              : s.cdf1(q1.atom_value(i) + std::ldexp(1.0, -int(w)));
      exact.masses.push_back(edge - prev);
      prev = edge;
    }
    const double tv = tv_discrete(qd, exact);
    const double bound =
        static_cast<double>(q1.atom_count()) * std::ldexp(1.0, -int(T));
    record("dyadic_mass_tv_bound", tv <= bound,
           {{"tv", tv}, {"bound", bound}, {"atoms", q1.atom_count()}});
  }

  // schatten norm comparison on random low-rank matrices
  {
    SplitMix rng(key_hash(g.seed, 0x5c8a));
    bool ok = true;
    for (int it = 0; it < 200 && ok; ++it) {
      const std::size_t p = 6 + rng.below(6), k = 1 + rng.below(3);
      DataMatrix u(p, k), v(p, k), a(p, p);
      for (double& e : u.data()) e = rng.normal();
      for (double& e : v.data()) e = rng.normal();
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
          double sum = 0.0;
          for (std::size_t r = 0; r < k; ++r) sum += u.at(i, r) * v.at(j, r);
          a.at(i, j) = sum;
        }
      const double s2 = schatten_norm(a, 2.0);
      for (double q : {1.0, 2.0, 4.0, HUGE_VAL}) {
        const double factor =
            std::max(1.0, std::pow(static_cast<double>(k),
                                   (std::isinf(q) ? 0.0 : 1.0 / q) - 0.5));
        ok = ok && schatten_norm(a, q) <= factor * s2 * (1.0 + 1e-9) + 1e-9;
      }
    }
    record("schatten_comparison", ok, {{"instances", 200}});
  }

  ordered_json j{{"seed", g.seed}, {"all_pass", all_ok}, {"checks", checks}};
  const std::string text = j.dump(2);
  if (!out_file.empty()) write_text(out_file, text + "\n");
  std::cout << text << "\n";
  return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"submatrix detection toolkit: tests, planted-clique reduction, "
               "estimators and verification oracles"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "global seed");
  app.add_option("--threads", g.threads, "worker threads");
  app.add_option("--out-dir", g.out_dir, "output directory");

  // pc-gen
  auto* pc = app.add_subcommand("pc-gen", "sample a random graph, optionally with a planted clique");
  std::size_t pc_n = 64, pc_kappa = 0;
  std::string pc_format = "edgelist", pc_out;
  pc->add_option("--n", pc_n, "graph size")->required();
  pc->add_option("--kappa", pc_kappa, "planted clique size (0 = none)");
  pc->add_option("--format", pc_format, "edgelist|bin")
      ->check(CLI::IsMember({"edgelist", "bin"}));
  pc->add_option("--out", pc_out, "output file");

  // reduce
  auto* rd = app.add_subcommand("reduce", "map a graph to a detection instance");
  std::string rd_graph, rd_t = "auto", rd_w = "auto", rd_mode = "discrete", rd_out, rd_cert;
  std::size_t rd_p = 0, rd_k = 1;
  double rd_lambda = 0.1;
  rd->add_option("--graph", rd_graph, "input graph file")->required();
  rd->add_option("--p", rd_p, "output dimension")->required();
  rd->add_option("--k", rd_k, "block size")->required();
  rd->add_option("--lambda", rd_lambda, "signal level")->required();
  rd->add_option("--t", rd_t, "output quantizer bits or 'auto'");
  rd->add_option("--w", rd_w, "input grid bits or 'auto'");
  rd->add_option("--mode", rd_mode, "discrete|continuous")
      ->check(CLI::IsMember({"discrete", "continuous"}));
  rd->add_option("--out", rd_out, "output matrix file");
  rd->add_option("--cert", rd_cert, "parameter/ledger certificate JSON");

  // detect
  auto* dt = app.add_subcommand("detect", "run a detection test on a matrix file");
  std::string dt_input, dt_test = "lin", dt_rows, dt_cols;
  std::size_t dt_k = 1;
  double dt_c = 1.0, dt_lambda = 0.0;
  std::uint64_t dt_budget = kDefaultScanBudget;
  dt->add_option("--input", dt_input, "matrix file")->required();
  dt->add_option("--test", dt_test, "lin|scan|max|support")
      ->check(CLI::IsMember({"lin", "scan", "max", "support"}));
  dt->add_option("--k", dt_k, "block size");
  dt->add_option("--c", dt_c, "threshold constant");
  dt->add_option("--lambda", dt_lambda, "signal level (sets the lin threshold)");
  dt->add_option("--budget", dt_budget, "scan subset budget");
  dt->add_option("--rows", dt_rows, "candidate row support (support test)");
  dt->add_option("--cols", dt_cols, "candidate column support (support test)");

  // estimate
  auto* es = app.add_subcommand("estimate", "Monte Carlo estimation risk of threshold+project");
  std::size_t es_p = 64, es_k = 4;
  double es_q = 2.0, es_level = -1.0, es_signal = -1.0;
  std::uint64_t es_trials = 200;
  es->add_option("--p", es_p, "dimension");
  es->add_option("--k", es_k, "sparsity");
  es->add_option("--q", es_q, "Schatten index (inf for spectral)");
  es->add_option("--threshold", es_level, "threshold level (default sqrt(4 log p))");
  es->add_option("--signal", es_signal, "block signal level (default = threshold)");
  es->add_option("--trials", es_trials, "Monte Carlo trials");

  // sweep
  auto* sw = app.add_subcommand("sweep", "phase-diagram sweep from a config file");
  std::string sw_config;
  sw->add_option("--config", sw_config, "sweep config file")->required();

  // verify
  auto* vf = app.add_subcommand("verify", "run the analytic-bound verification suite");
  std::string vf_out;
  vf->add_option("--out", vf_out, "write the JSON report here");

  // demo
  auto* dm = app.add_subcommand("demo", "end-to-end reduction demo");
  std::size_t dm_p = 16, dm_k = 1;
  double dm_lambda = 0.1;
  std::uint64_t dm_reps = 100;
  std::string dm_t = "auto", dm_w = "auto";
  bool dm_strict = false;
  dm->add_option("--p", dm_p, "dimension");
  dm->add_option("--k", dm_k, "block size");
  dm->add_option("--lambda", dm_lambda, "signal level");
  dm->add_option("--reps", dm_reps, "repetitions per hypothesis");
  dm->add_option("--t", dm_t, "output quantizer bits or 'auto'");
  dm->add_option("--w", dm_w, "input grid bits or 'auto'");
  dm->add_flag("--strict", dm_strict, "enforce the policy preconditions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pc) return cmd_pc_gen(g, pc_n, pc_kappa, pc_format, pc_out);
    if (*rd)
      return cmd_reduce(g, rd_graph, rd_p, rd_k, rd_lambda, rd_t, rd_w, rd_mode,
                        rd_out, rd_cert);
    if (*dt)
      return cmd_detect(dt_input, dt_test, dt_k, dt_c, dt_lambda, dt_budget, dt_rows,
                        dt_cols, g.threads);
    if (*es) return cmd_estimate(g, es_p, es_k, es_q, es_level, es_signal, es_trials);
    if (*sw) return cmd_sweep(g, sw_config);
    if (*vf) return cmd_verify(g, vf_out);
    if (*dm) return cmd_demo(g, dm_p, dm_k, dm_lambda, dm_reps, dm_t, dm_w, dm_strict);
  } catch (const ScanBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
