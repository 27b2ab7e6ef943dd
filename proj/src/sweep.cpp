#include "submx/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "submx/model.hpp"
#include "submx/plantedclique.hpp"
#include "submx/rng.hpp"

namespace submx {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> parse_list(const std::string& raw, int line_no) {
  std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']')
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": unterminated list");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

double to_double(const std::string& s, int line_no) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size())
    throw std::invalid_argument("config line " + std::to_string(line_no) +
                                ": bad number '" + s + "'");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig c;
  c.trials = 0;  // force explicit
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  bool saw_tests = false;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = line.substr(eq + 1);
    const auto items = parse_list(val, line_no);
    if (items.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": empty value for " + key);
    if (key == "p") {
      c.dims.clear();
      for (const auto& s : items)
        c.dims.push_back(static_cast<std::size_t>(std::stoull(s)));
    } else if (key == "alpha") {
      c.alphas.clear();
      for (const auto& s : items) c.alphas.push_back(to_double(s, line_no));
    } else if (key == "beta") {
      c.betas.clear();
      for (const auto& s : items) c.betas.push_back(to_double(s, line_no));
    } else if (key == "trials") {
      c.trials = std::stoull(items[0]);
    } else if (key == "tests") {
      c.tests = items;
      saw_tests = true;
    } else if (key == "seed") {
      c.seed = std::stoull(items[0]);
    } else if (key == "budget") {
      c.scan_budget = std::stoull(items[0]);
    } else if (key == "c") {
      c.c = to_double(items[0], line_no);
    } else if (key == "delta") {
      c.delta = to_double(items[0], line_no);
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(std::stoul(items[0]));
    } else {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }
  (void)saw_tests;
  if (c.dims.empty() || c.alphas.empty() || c.betas.empty())
    throw std::invalid_argument("config: p, alpha and beta are required");
  if (c.trials < 100) throw std::invalid_argument("config: trials must be >= 100");
  for (double a : c.alphas)
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("config: alpha outside (0,1)");
  for (double b : c.betas)
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("config: beta outside [0,1]");
  for (const auto& t : c.tests)
    if (t != "lin" && t != "scan" && t != "max")
      throw std::invalid_argument("config: unknown test '" + t + "'");
  return c;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_config(ss.str());
}

bool sweep_trial_reject(const std::string& test, std::size_t p, std::size_t k,
                        double lambda, bool alternative, const TestThresholds& th,
                        std::uint64_t scan_budget, std::uint64_t seed,
                        std::uint64_t matrix_id) {
  // the alternative plants a constant block on the first k rows/columns;
  // every test here is permutation-invariant, so the placement is immaterial
  if (test == "scan") {
    std::vector<std::uint32_t> support(k);
    for (std::size_t i = 0; i < k; ++i) support[i] = static_cast<std::uint32_t>(i + 1);
    MeanMatrixSpec spec;
    spec.dim = p;
    if (alternative) {
      spec.rows = support;
      spec.cols = support;
      spec.level = lambda;
    }
    const DataMatrix x = sample_gaussian(spec, seed, matrix_id);
    return scan_stat(x, k, scan_budget).stat > th.scan;
  }
  // streamed lin/max; identical arithmetic to the materialized path
  double acc = test == "lin" ? 0.0 : -HUGE_VAL;
  for (std::size_t i = 0; i < p; ++i) {
    const bool sig_row = alternative && i < k;
    for (std::size_t j = 0; j < p; ++j) {
      const double mean = (sig_row && j < k) ? lambda : 0.0;
      const double v = mean + normal_at(seed, matrix_id, i, j);
      if (test == "lin")
        acc += v;
      else
        acc = std::max(acc, v);
    }
  }
  if (test == "lin") return acc / static_cast<double>(p) > th.lin;
  return acc > th.max;
}

SweepReport run_sweep(const SweepConfig& config) {
  SweepReport report;
  report.config = config;

  struct Key {
    double alpha, beta;
    std::size_t p;
    std::string test;
  };
  std::vector<Key> keys;
  for (double a : config.alphas)
    for (double b : config.betas)
      for (std::size_t p : config.dims)
        for (const auto& t : config.tests) keys.push_back({a, b, p, t});
  std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
    if (x.alpha != y.alpha) return x.alpha < y.alpha;
    if (x.beta != y.beta) return x.beta < y.beta;
    if (x.p != y.p) return x.p < y.p;
    return x.test < y.test;
  });

  for (std::size_t ci = 0; ci < keys.size(); ++ci) {
    const Key& key = keys[ci];
    SweepCell cell;
    cell.alpha = key.alpha;
    cell.beta = key.beta;
    cell.p = key.p;
    cell.test = key.test;
    cell.k = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(key.p), key.alpha)));
    cell.k = std::max<std::size_t>(1, std::min(cell.k, key.p));
    cell.lambda = std::pow(static_cast<double>(key.p), -key.beta);
    cell.regime = classify_regime(key.alpha, key.beta);

    if (key.test == "scan" &&
        scan_subset_count(key.p, cell.k) > static_cast<double>(config.scan_budget)) {
      cell.budget_skipped = true;
      report.cells.push_back(cell);
      continue;
    }

    const TestThresholds th =
        detection_thresholds(key.p, cell.k, cell.lambda, config.c);
    // cell owns a derived seed; trials are keyed (seed, trial), so results
    // do not depend on scheduling
    const std::uint64_t cell_seed = key_hash(config.seed, 0x5347u, ci);
    const auto t0 = std::chrono::steady_clock::now();
    const ErrorRates rates = mc_error(
        [&](std::uint64_t trial) {
          return sweep_trial_reject(key.test, key.p, cell.k, cell.lambda, false,
                                    th, config.scan_budget, cell_seed, 2 * trial);
        },
        [&](std::uint64_t trial) {
          return sweep_trial_reject(key.test, key.p, cell.k, cell.lambda, true,
                                    th, config.scan_budget, cell_seed,
                                    2 * trial + 1);
        },
        config.trials, config.threads);
    cell.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    cell.type1 = rates.type1;
    cell.type2 = rates.type2;
    cell.total_error = cell.type1.point + cell.type2.point;
    report.cells.push_back(cell);
  }
  return report;
}

std::string SweepReport::csv() const {
  std::string out =
      "alpha,beta,p,k,lambda,test,regime,budget_skipped,type1,type1_lo,type1_hi,"
      "type2,type2_lo,type2_hi,total_error\n";
  for (const auto& c : cells) {
    out += fmt(c.alpha) + "," + fmt(c.beta) + "," + std::to_string(c.p) + "," +
           std::to_string(c.k) + "," + fmt(c.lambda) + "," + c.test + "," +
           regime_name(c.regime) + "," + (c.budget_skipped ? "1" : "0") + ",";
    if (c.budget_skipped) {
      out += ",,,,,,\n";
    } else {
      out += fmt(c.type1.point) + "," + fmt(c.type1.ci_low) + "," +
             fmt(c.type1.ci_high) + "," + fmt(c.type2.point) + "," +
             fmt(c.type2.ci_low) + "," + fmt(c.type2.ci_high) + "," +
             fmt(c.total_error) + "\n";
    }
  }
  return out;
}

namespace {

ordered_json estimate_json(const MCEstimate& e) {
  return ordered_json{{"trials", e.trials},
                      {"successes", e.successes},
                      {"point", e.point},
                      {"ci_low", e.ci_low},
                      {"ci_high", e.ci_high}};
}

}  // namespace

std::string SweepReport::to_json_string() const {
  ordered_json j;
  j["config"] = {{"p", config.dims},          {"alpha", config.alphas},
                 {"beta", config.betas},      {"trials", config.trials},
                 {"tests", config.tests},     {"seed", config.seed},
                 {"budget", config.scan_budget}, {"c", config.c},
                 {"delta", config.delta}};
  j["cells"] = ordered_json::array();
  ordered_json timing = ordered_json::array();
  for (const auto& c : cells) {
    ordered_json jc{{"alpha", c.alpha},
                    {"beta", c.beta},
                    {"p", c.p},
                    {"k", c.k},
                    {"lambda", c.lambda},
                    {"test", c.test},
                    {"regime", regime_name(c.regime)},
                    {"budget_skipped", c.budget_skipped}};
    if (!c.budget_skipped) {
      jc["type1"] = estimate_json(c.type1);
      jc["type2"] = estimate_json(c.type2);
      jc["total_error"] = c.total_error;
    }
    j["cells"].push_back(jc);
    timing.push_back(c.seconds);
  }
  j["timing"] = timing;  // wall clock; varies run to run
  return j.dump(2);
}

namespace {

// map (alpha, beta) to SVG coordinates
struct SvgFrame {
  double x0 = 60, y0 = 20, w = 520, h = 480;
  double x(double alpha) const { return x0 + alpha * w; }
  double y(double beta) const { return y0 + (1.0 - beta) * h; }
};

std::string polyline(const SvgFrame& f, const std::vector<std::pair<double, double>>& pts,
                     const std::string& fill) {
  std::string s = "<polygon fill=\"" + fill + "\" stroke=\"none\" points=\"";
  for (const auto& [a, b] : pts)
    s += fmt(f.x(a)) + "," + fmt(f.y(b)) + " ";
  s += "\"/>\n";
  return s;
}

}  // namespace

std::string phase_diagram_svg(const SweepReport& report) {
  SvgFrame f;
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"560\" "
       "viewBox=\"0 0 640 560\">\n";
  s += "<rect width=\"640\" height=\"560\" fill=\"white\"/>\n";

  // region boundaries: upper curve max(alpha/2, 2 alpha - 1), lower curve
  // max(0, 2 alpha - 1); sampled finely so the kinks render exactly
  std::vector<std::pair<double, double>> upper, lower;
  for (int i = 0; i <= 200; ++i) {
    const double a = i / 200.0;
    upper.emplace_back(a, std::min(1.0, beta_star(a)));
    lower.emplace_back(a, std::min(1.0, beta_sharp(a)));
  }

  // statistically impossible: above the upper curve
  {
    auto pts = upper;
    pts.emplace_back(1.0, 1.0);
    pts.emplace_back(0.0, 1.0);
    s += polyline(f, pts, "#f4c7c3");
  }
  // hard region: between the curves
  {
    auto pts = upper;
    for (auto it = lower.rbegin(); it != lower.rend(); ++it) pts.push_back(*it);
    s += polyline(f, pts, "#fce8b2");
  }
  // efficient region: below the lower curve
  {
    auto pts = lower;
    pts.emplace_back(1.0, 0.0);
    pts.emplace_back(0.0, 0.0);
    s += polyline(f, pts, "#b7e1cd");
  }

  // axes + labels
  s += "<rect x=\"" + fmt(f.x0) + "\" y=\"" + fmt(f.y0) + "\" width=\"" + fmt(f.w) +
       "\" height=\"" + fmt(f.h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fmt(f.x0 + f.w / 2) +
       "\" y=\"545\" text-anchor=\"middle\" font-size=\"14\">alpha (block size "
       "exponent)</text>\n";
  s += "<text x=\"18\" y=\"" + fmt(f.y0 + f.h / 2) +
       "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 " +
       fmt(f.y0 + f.h / 2) + ")\">beta (signal decay exponent)</text>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = i / 5.0;
    s += "<text x=\"" + fmt(f.x(v)) + "\" y=\"" + fmt(f.y0 + f.h + 16) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + fmt(v) + "</text>\n";
    s += "<text x=\"" + fmt(f.x0 - 8) + "\" y=\"" + fmt(f.y(v) + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + fmt(v) + "</text>\n";
  }
  s += "<text x=\"" + fmt(f.x(0.22)) + "\" y=\"" + fmt(f.y(0.78)) +
       "\" font-size=\"12\">impossible</text>\n";
  s += "<text x=\"" + fmt(f.x(0.30)) + "\" y=\"" + fmt(f.y(0.075)) +
       "\" font-size=\"12\">hard under planted clique</text>\n";
  s += "<text x=\"" + fmt(f.x(0.72)) + "\" y=\"" + fmt(f.y(0.22)) +
       "\" font-size=\"12\">poly-time easy</text>\n";

  // one marker per measured cell, sized by error, colored by test
  for (const auto& c : report.cells) {
    if (c.budget_skipped) {
      s += "<text x=\"" + fmt(f.x(c.alpha)) + "\" y=\"" + fmt(f.y(c.beta) + 4) +
           "\" text-anchor=\"middle\" font-size=\"11\">x</text>\n";
      continue;
    }
    const std::string color =
        c.test == "lin" ? "#3366cc" : (c.test == "scan" ? "#109618" : "#dc3912");
    const double r = 2.5 + 9.0 * std::min(1.0, c.total_error);
    s += "<circle cx=\"" + fmt(f.x(c.alpha)) + "\" cy=\"" + fmt(f.y(c.beta)) +
         "\" r=\"" + fmt(r) + "\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"1.5\"><title>" + c.test + " p=" + std::to_string(c.p) +
         " err=" + fmt(c.total_error) + "</title></circle>\n";
  }
  s += "<text x=\"" + fmt(f.x0) + "\" y=\"14\" font-size=\"11\">markers: circle "
       "radius ~ empirical type I+II error (blue lin, green scan, red max); x = "
       "budget-skipped</text>\n";
  s += "</svg>\n";
  return s;
}

DemoReport run_reduction_demo(const DemoConfig& config) {
  DemoReport rep;
  if (config.strict) {
    rep.params = choose_params(config.p, config.k, config.lambda, config.t, config.w);
  } else {
    const std::size_t ell = choose_copies(config.p, config.lambda);
    const unsigned t =
        config.t < 0 ? default_out_scale(config.p) : static_cast<unsigned>(config.t);
    const unsigned w =
        config.w < 0 ? default_in_scale(config.p) : static_cast<unsigned>(config.w);
    rep.params = assemble_params(config.p, config.k, config.lambda, ell, t,
                                 std::max(w, t));
  }
  const ReductionParams& pr = rep.params;
  if (pr.clique > pr.graph_n)
    throw std::invalid_argument(
        "demo: clique size 20k = " + std::to_string(pr.clique) +
        " exceeds the graph size N = " + std::to_string(pr.graph_n) +
        "; lower lambda (larger graph) or k");
  rep.forecast = bit_budget(pr);
  rep.scan_threshold =
      detection_thresholds(pr.dim, pr.block, pr.signal, config.c).scan;

  const double kk = static_cast<double>(pr.block);
  rep.bound_null = 10.0 / static_cast<double>(pr.dim);
  rep.bound_split = 40.0 * kk * std::pow(std::exp(1.0) / 4.0, 5.0 * kk);
  rep.bound_collide = 2.0 * kk *
                      std::exp(-4.0 * kk * std::log(static_cast<double>(pr.dim) /
                                                    (20.0 * kk)));
  rep.bound_total = rep.bound_null + rep.bound_split + rep.bound_collide;

  std::uint64_t null_rejects = 0, misses = 0, events = 0;
  bool ledger_ok = true;
  CoinLedger first_ledger;
  for (std::uint64_t r = 0; r < config.reps; ++r) {
    // null side
    {
      const AdjacencyMatrix a = sample_er(pr.graph_n, config.seed, 2 * r);
      CoinLedger led;
      CounterCoins coins(config.seed, key_hash(0xd0, 2 * r));
      const QuantizedMatrix x =
          reduce_discrete(a.lower_left_quarter(), pr, coins, &led, config.threads);
      if (r == 0) first_ledger = led;
      if (led.total != rep.forecast.random_bits) ledger_ok = false;
      if (scan_stat(x.to_real(), pr.block, kDefaultScanBudget, config.threads).stat >
          rep.scan_threshold)
        ++null_rejects;
    }
    // planted side
    {
      const AdjacencyMatrix a =
          sample_planted(pr.graph_n, pr.clique, config.seed, 2 * r + 1);
      const FoldReport fr = fold_report(a.planted(), pr.graph_n, pr.dim, pr.block);
      if (fr.event) ++events;
      CoinLedger led;
      CounterCoins coins(config.seed, key_hash(0xd1, 2 * r + 1));
      const QuantizedMatrix x =
          reduce_discrete(a.lower_left_quarter(), pr, coins, &led, config.threads);
      if (led.total != rep.forecast.random_bits) ledger_ok = false;
      if (!(scan_stat(x.to_real(), pr.block, kDefaultScanBudget, config.threads).stat >
            rep.scan_threshold))
        ++misses;
    }
  }
  rep.ledger = first_ledger;
  rep.ledger_matches_forecast = ledger_ok;
  rep.null_reject = wilson_estimate(null_rejects, config.reps);
  rep.alt_miss = wilson_estimate(misses, config.reps);
  rep.event_rate = wilson_estimate(events, config.reps);
  return rep;
}

std::string DemoReport::to_json_string() const {
  ordered_json j;
  j["params"] = {{"p", params.dim},
                 {"k", params.block},
                 {"lambda", params.signal},
                 {"kappa", params.clique},
                 {"ell", params.copies},
                 {"n", params.graph_n},
                 {"n2", params.half_n},
                 {"m", params.trunc},
                 {"mu", params.shift},
                 {"t", params.out_scale},
                 {"w", params.in_scale},
                 {"mass_bits", params.mass_bits},
                 {"dim_precondition_ok", params.dim_ok},
                 {"signal_admissible", params.signal_ok},
                 {"in_scale_tv_ok", params.in_scale_ok}};
  j["coin_budget"] = {{"forecast_bits", forecast.random_bits},
                      {"ledger_total", ledger.total},
                      {"ledger_phase0", ledger.phase0},
                      {"ledger_phase1", ledger.phase1},
                      {"every_rep_matches_forecast", ledger_matches_forecast},
                      {"ops_estimate", forecast.ops_estimate}};
  j["scan_threshold"] = scan_threshold;
  j["null_reject"] = estimate_json(null_reject);
  j["alt_miss"] = estimate_json(alt_miss);
  j["event_rate"] = estimate_json(event_rate);
  j["transfer_bound"] = {{"null_term", bound_null},
                         {"split_term", bound_split},
                         {"collision_term", bound_collide},
                         {"total", bound_total}};
  return j.dump(2);
}

}  // namespace submx
