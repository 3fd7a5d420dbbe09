// Acceptance suite. With no arguments every criterion runs and prints one
// PASS/FAIL line; `--criterion N` runs one. The exit status is non-zero when
// any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"

#include "aidroute/batch.hpp"
#include "aidroute/catalog_io.hpp"
#include "aidroute/commands.hpp"
#include "aidroute/coverage.hpp"
#include "aidroute/field.hpp"
#include "aidroute/fleet.hpp"
#include "aidroute/grid_io.hpp"
#include "aidroute/packing.hpp"
#include "aidroute/route_io.hpp"
#include "aidroute/sensitivity.hpp"
#include "aidroute/siting.hpp"
#include "aidroute/walker.hpp"

namespace fs = std::filesystem;
using namespace aidroute;

namespace {

const fs::path kData = AIDROUTE_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) { return format_fixed(v, digits); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path make_temp_dir() {
  std::string tmpl = (fs::temp_directory_path() / "aidroute_acc_XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  return tmpl;
}

// P(X >= wins) for X ~ Binomial(n, 1/2).
double sign_test_p(int wins, int n) {
  if (n == 0) return 1.0;
  double p = 0.0;
  for (int k = wins; k <= n; ++k)
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                  n * std::log(2.0));
  return std::min(1.0, p);
}

SynthSpec loop_spec() {
  SynthSpec s;
  s.name = "loop-road";
  return s;
}

// ------------------------------------------------------------------ 1

Outcome range_formula() {
  const auto shipped = parse_drone_catalog(read_text_file(kData / "catalog" / "drones.csv"));
  const auto builtin = default_drone_catalog();
  const RangeModel model;  // k = 1.3
  bool ok = shipped.size() == builtin.size();
  std::string detail;
  for (const auto* catalog : {&builtin, &shipped}) {
    const DroneSpec* b = find_drone(*catalog, "B");
    const DroneSpec* c = find_drone(*catalog, "C");
    if (!b || !c) return {false, "catalog lacks B or C"};
    const double b2 = max_reach_km(*b, model, 2.0);
    const double c5 = max_reach_km(*c, model, 5.0);
    const double b0 = max_reach_km(*b, model, 0.0);
    ok = ok && std::abs(b2 - 47.06) <= 0.01 && std::abs(c5 - 31.39) <= 0.01 &&
         std::abs(b0 - 52.67) <= 0.01;
    detail = "B(l=2) " + fmt(b2) + " km, C(l=5) " + fmt(c5) + " km, B(l=0) " + fmt(b0) + " km";
  }
  return {ok, detail};
}

// ------------------------------------------------------------------ 2

Outcome packing_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(20180210);
  int agree = 0, feasible = 0, bad_witness = 0;
  const int n = 500;
  for (int i = 0; i < n; ++i) {
    const auto inst = oracle::random_pack_instance(gen);
    std::vector<Box> boxes;
    for (std::size_t b = 0; b < inst.boxes.size(); ++b)
      boxes.push_back({"box" + std::to_string(b), inst.boxes[b], 1.0});
    GAConfig cfg;
    cfg.seed = derive_seed(99, static_cast<std::uint64_t>(i));
    const PackingResult ga = pack_feasible(inst.bay, boxes, cfg);
    const bool exact = oracle::pack_by_packing_classes(inst.bay, inst.boxes);
    agree += ga.feasible == exact;
    feasible += exact;
    if (ga.feasible && !placement_valid(inst.bay, boxes, ga.placements)) ++bad_witness;
  }
  const double secs = seconds_since(t0);
  return {agree == n && bad_witness == 0 && secs < 60.0,
          std::to_string(agree) + "/" + std::to_string(n) + " verdicts agree (" +
              std::to_string(feasible) + " feasible), " + std::to_string(bad_witness) +
              " invalid witnesses, " + fmt(secs, 1) + " s"};
}

// ------------------------------------------------------------------ 3

Outcome siting() {
  // Shipped fixture through the real pipeline.
  const fs::path dir = make_temp_dir();
  std::ostringstream out, err;
  const std::string cfg = (kData / "puerto_rico" / "config.json").string();
  int rc = run_cli({"build-field", "--config", cfg, "--out", dir.string()}, out, err);
  if (rc == 0) rc = run_cli({"plan", "--config", cfg, "--out", dir.string()}, out, err);
  bool partition_ok = false;
  std::string got;
  if (rc == 0) {
    const auto plan = nlohmann::json::parse(read_text_file(dir / "plan.json"));
    const auto& bp = plan.at("base_plan");
    std::set<std::set<std::string>> groups;
    for (const auto& b : bp.at("bases")) {
      std::set<std::string> g;
      for (const auto& d : b.at("destinations")) g.insert(d.get<std::string>());
      if (!g.empty()) groups.insert(g);
    }
    const std::set<std::set<std::string>> want{{"HPA"}, {"HIMA", "HPS", "PRCH"}, {"CMC"}};
    partition_ok = bp.at("k").get<int>() == 3 && groups == want;
    for (const auto& g : groups) {
      got += "{";
      for (const auto& s : g) got += s + (s == *g.rbegin() ? "" : ",");
      got += "}";
    }
    got = "k=" + std::to_string(bp.at("k").get<int>()) + " " + got;
  } else {
    got = "pipeline exit " + std::to_string(rc) + ": " + err.str();
  }
  fs::remove_all(dir);

  // Synthetic sets against brute-force partitions.
  int match = 0;
  for (int run = 0; run < 100; ++run) {
    std::mt19937_64 g(5000 + run);
    std::uniform_int_distribution<int> nd(4, 12), kd(2, 3), bd(0, 1);
    const int npts = nd(g), k = kd(g);
    const int blobs = k + bd(g);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::normal_distribution<double> jitter(0.0, 0.08);
    std::vector<LatLon> centers;
    for (int b = 0; b < blobs; ++b) centers.push_back({18.0 + u(g), -66.0 + u(g)});
    std::vector<WeightedPoint> pts;
    for (int i = 0; i < npts; ++i) {
      const LatLon c = centers[i % blobs];
      pts.push_back({{c.lat + jitter(g), c.lon + jitter(g)}, 1.0, PointTag::destination});
    }
    const KMeansResult r = kmeans(pts, static_cast<std::size_t>(k), 7000 + run);
    double mean_lat = 0.0;
    for (const auto& p : pts) mean_lat += p.pos.lat / npts;
    const double c = std::cos(mean_lat * M_PI / 180.0);
    std::vector<oracle::PlanarPt> planar;
    for (const auto& p : pts) planar.push_back({p.pos.lon * c, p.pos.lat, p.weight});
    std::vector<int> best_labels;
    const double best = oracle::best_wcss(planar, k, &best_labels);
    const double mine = oracle::wcss(planar, r.labels, k);
    if (oracle::canonical(best_labels) == oracle::canonical(r.labels) ||
        std::abs(mine - best) <= 1e-12 * std::max(1.0, best))
      ++match;
  }
  return {partition_ok && match >= 95,
          "Puerto Rico " + got + "; k-means optimal in " + std::to_string(match) + "/100 runs"};
}

// ------------------------------------------------------------------ 4

Outcome walker_invariants() {
  const auto t0 = std::chrono::steady_clock::now();
  const SynthSpec spec = loop_spec();
  const Field field = synth_field(spec);
  const Cell origin = synth_origin(spec);
  const WalkParams base;
  const std::size_t n = 10000;
  const std::uint64_t master = 4242;

  const auto routes = run_walks(field, origin, base, n, master, 1);
  std::size_t home = 0, bad_home = 0, bad_path = 0;
  for (const auto& r : routes) {
    for (std::size_t i = 1; i < r.cells.size(); ++i) {
      const int dr = std::abs(r.cells[i].row - r.cells[i - 1].row);
      const int dc = std::abs(r.cells[i].col - r.cells[i - 1].col);
      if (std::max(dr, dc) != 1) ++bad_path;
    }
    if (r.is_home()) {
      ++home;
      if (r.cells.size() < 2 || r.cells.front() != r.cells.back() ||
          r.distance_m > base.mfd_m)
        ++bad_home;
    }
  }

  // Step-level checks on every 20th walk, replayed with the same seed.
  std::size_t steps = 0, bad_softmax = 0, rejections = 0, bad_reject = 0, replay_mismatch = 0;
  for (std::size_t i = 0; i < n; i += 20) {
    WalkParams p = base;
    p.seed = derive_seed(master, i);
    Walk w(field, origin, p);
    while (!w.done()) {
      const WalkState before = w.state();
      const auto out = w.step();
      if (!out) break;
      ++steps;
      if (std::abs(out->road_softmax_sum - 1.0) > 1e-9 || std::abs(out->home_softmax_sum - 1.0) > 1e-9)
        ++bad_softmax;
      if (!out->accepted) {
        ++rejections;
        const WalkState& after = w.state();
        if (after.position != before.position || after.distance_m != before.distance_m ||
            !(after.overlay == before.overlay) || after.cells != before.cells ||
            after.scenario != before.scenario || after.proposals != before.proposals + 1)
          ++bad_reject;
      }
    }
    const RouteResult replay = w.result();
    if (route_csv(replay, field.meta()) != route_csv(routes[i], field.meta()) ||
        dump_json(route_summary_json(replay)) != dump_json(route_summary_json(routes[i])))
      ++replay_mismatch;
  }

  // Gamma sign pattern.
  std::mt19937_64 g(77);
  std::uniform_real_distribution<double> ua(0.01, 3.0), ub(0.0, 1.5), ud(0.0, 1.0);
  std::size_t bad_gamma = 0;
  for (int i = 0; i < 1000; ++i) {
    WalkParams p = base;
    p.alpha = ua(g);
    p.beta = ub(g);
    const double d = ud(g) * 2.0 * p.mfd_m;
    const double gam = gamma_weight(d, p);
    const double pivot = p.beta * p.mfd_m;
    const bool ok = d < pivot ? gam < 0 : d > pivot ? gam > 0 : gam == 0;
    // d / mfd need not round back to beta exactly at the pivot.
    if (!ok || std::abs(gamma_weight(pivot, p)) > 1e-40) ++bad_gamma;
  }

  // Byte-identical reruns, also across worker counts.
  const auto again = run_walks(field, origin, base, n, master, 4);
  const bool identical =
      results_csv(again) == results_csv(routes) &&
      std::equal(routes.begin(), routes.end(), again.begin(),
                 [](const RouteResult& a, const RouteResult& b) { return a.cells == b.cells; });

  const double secs = seconds_since(t0);
  const bool pass = bad_home == 0 && bad_path == 0 && bad_softmax == 0 && rejections > 0 &&
                    bad_reject == 0 && replay_mismatch == 0 && bad_gamma == 0 && identical &&
                    home > 0 && secs < 300.0;
  return {pass, std::to_string(n) + " walks, " + std::to_string(home) + " home (" +
                    std::to_string(bad_home) + " open/over budget); softmax off in " +
                    std::to_string(bad_softmax) + "/" + std::to_string(steps) + " steps; " +
                    std::to_string(bad_reject) + "/" + std::to_string(rejections) +
                    " rejections changed state; gamma sign errors " + std::to_string(bad_gamma) +
                    "; reruns " + (identical && replay_mismatch == 0 ? "identical" : "DIFFER") +
                    "; " + fmt(secs, 1) + " s"};
}

// ------------------------------------------------------------------ 5

Outcome ablation() {
  const SynthSpec spec = loop_spec();
  const Field field = synth_field(spec);
  const Cell origin = synth_origin(spec);
  const WalkParams biased;
  WalkParams blind = biased;
  blind.road_attraction = false;
  blind.home_attraction = false;
  const std::size_t n = 1000;
  const std::uint64_t master = 2019;
  const auto a = run_walks(field, origin, biased, n, master);
  const auto b = run_walks(field, origin, blind, n, master);

  double sum_a = 0.0, sum_b = 0.0;
  int home_a = 0, home_b = 0, wins = 0, losses = 0, ties = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].is_home()) {
      ++home_a;
      sum_a += a[i].coverage;
    }
    if (b[i].is_home()) {
      ++home_b;
      sum_b += b[i].coverage;
    }
    if (a[i].is_home() && b[i].is_home()) {
      if (a[i].coverage > b[i].coverage)
        ++wins;
      else if (a[i].coverage < b[i].coverage)
        ++losses;
      else
        ++ties;
    }
  }
  const double mean_a = home_a ? sum_a / home_a : 0.0;
  const double mean_b = home_b ? sum_b / home_b : 0.0;
  const double p = sign_test_p(wins, wins + losses);
  return {mean_a > mean_b && p < 0.01,
          "home-route mean coverage " + fmt(mean_a, 2) + " (" + std::to_string(home_a) +
              " home) vs ablation " + fmt(mean_b, 2) + " (" + std::to_string(home_b) +
              " home); seeds home in both arms: " + std::to_string(wins) + " wins, " +
              std::to_string(losses) + " losses, " + std::to_string(ties) +
              " ties, one-sided sign test p = " + fmt(p, 4)};
}

// ------------------------------------------------------------------ 6

std::vector<Cell> random_route(std::mt19937_64& g, const GridMeta& m, int row_lo, int row_hi,
                               std::optional<Cell> start = std::nullopt) {
  std::uniform_int_distribution<int> r0(row_lo, row_hi), c0(0, m.n_cols - 1), len(1, 120), step(-1, 1);
  std::vector<Cell> cells{start ? *start : Cell{r0(g), c0(g)}};
  const int steps = len(g);
  for (int i = 0; i < steps; ++i) {
    Cell c = cells.back();
    c.row = std::clamp(c.row + step(g), row_lo, row_hi);
    c.col = std::clamp(c.col + step(g), 0, m.n_cols - 1);
    cells.push_back(c);
  }
  return cells;
}

Outcome coverage_algebra() {
  SynthSpec spec;
  spec.name = "grid-roads";
  spec.n_rows = 80;
  spec.n_cols = 80;
  spec.spacing = 7;
  const Field field = synth_field(spec);
  const GridMeta& m = field.meta();
  std::mt19937_64 g(606);
  int bad_sym = 0, bad_idem = 0, bad_add = 0, bad_bound = 0, disjoint = 0;
  for (int i = 0; i < 1000; ++i) {
    const KnnRule rule = i % 3 == 0 ? KnnRule::four : i % 3 == 1 ? KnnRule::eight : KnnRule::twelve;
    const CcrArea area = i % 2 ? CcrArea::all : CcrArea::road;
    // Every other pair lives in separate halves of the grid, far enough
    // apart that the covered sets cannot meet.
    const bool split = i % 2 == 0;
    const auto a = split ? random_route(g, m, 0, 33) : random_route(g, m, 0, m.n_rows - 1);
    // The others share a start cell, so their covered sets usually meet.
    const auto b = split ? random_route(g, m, 46, m.n_rows - 1)
                         : random_route(g, m, 0, m.n_rows - 1, a.front());

    const CoverageReport ab = ccr(a, b, field, rule, area);
    const CoverageReport ba = ccr(b, a, field, rule, area);
    if (ab.net_coverage != ba.net_coverage || ab.area != ba.area || ab.ccr != ba.ccr) ++bad_sym;

    const auto ca = covered_cells(a, field, rule);
    const auto cb = covered_cells(b, field, rule);
    const CoverageReport aa = ccr(a, a, field, rule, area);
    const CoverageReport a_alone = ccr(a, std::span<const Cell>{}, field, rule, area);
    if (aa.net_coverage != ca.size() || aa.area != a_alone.area ||
        (aa.ccr && std::abs(*aa.ccr - double(ca.size()) / aa.area) > 1e-12))
      ++bad_idem;

    std::vector<std::size_t> inter;
    std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(inter));
    if (ab.net_coverage != ca.size() + cb.size() - inter.size()) ++bad_add;
    if (inter.empty()) {
      ++disjoint;
      if (ab.net_coverage != ca.size() + cb.size()) ++bad_add;
    }

    if (ab.ccr) {
      const double lower = double(std::max(ca.size(), cb.size())) / ab.area;
      if (*ab.ccr > 1.0 || *ab.ccr < 0.0 || *ab.ccr + 1e-15 < lower) ++bad_bound;
    } else if (ab.area != 0) {
      ++bad_bound;
    }
  }
  return {bad_sym == 0 && bad_idem == 0 && bad_add == 0 && bad_bound == 0 && disjoint >= 400 && disjoint <= 900,
          "1000 pairs (" + std::to_string(disjoint) + " disjoint): symmetry " +
              std::to_string(bad_sym) + ", idempotence " + std::to_string(bad_idem) +
              ", additivity " + std::to_string(bad_add) + ", bounds " + std::to_string(bad_bound) +
              " violations"};
}

// ------------------------------------------------------------------ 7

Outcome sensitivity_pipeline() {
  const ParamDist dist;
  const std::size_t n = 10000;
  const std::uint64_t seed = 2019;
  const auto draws = sample_params(dist, n, seed);
  std::vector<double> a, b;
  for (const auto& d : draws) {
    a.push_back(d.alpha);
    b.push_back(d.beta);
  }
  const auto fa = fit_lognormal(a).params();
  const auto fb = fit_lognormal(b).params();
  auto rel = [](double got, double want) { return std::abs(got - want) / want; };
  const double worst = std::max({rel(fa.mean(), dist.mean_alpha), rel(fa.variance(), dist.var_alpha),
                                 rel(fb.mean(), dist.mean_beta), rel(fb.variance(), dist.var_beta)});
  const bool moments_ok = worst <= 0.05;

  // Walk batch on the loop fixture with the sampled parameters.
  const SynthSpec spec = loop_spec();
  const Field field = synth_field(spec);
  const auto results = run_walks(field, synth_origin(spec), WalkParams{}, n, seed, 1,
                                 [&](std::size_t i, WalkParams& p) {
                                   p.alpha = draws[i].alpha;
                                   p.beta = draws[i].beta;
                                 });
  const double threshold = median_home_coverage(results);
  const auto filtered = filter_by_coverage(results, threshold);
  std::vector<double> fa_all, fb_all, fa_f, fb_f;
  for (const auto& r : results) {
    fa_all.push_back(r.alpha);
    fb_all.push_back(r.beta);
  }
  for (const auto& r : filtered) {
    fa_f.push_back(r.alpha);
    fb_f.push_back(r.beta);
  }
  bool bins_ok = true;
  for (const auto& [all, sub] : {std::pair{&fa_all, &fa_f}, std::pair{&fb_all, &fb_f}}) {
    const double hi = *std::max_element(all->begin(), all->end());
    const Histogram h_all = histogram(*all, 0.0, hi, 30);
    const Histogram h_sub = histogram(*sub, 0.0, hi, 30);
    for (std::size_t k = 0; k < h_all.counts.size(); ++k)
      if (h_sub.counts[k] > h_all.counts[k]) bins_ok = false;
  }

  std::mt19937_64 g(31);
  std::uniform_real_distribution<double> ux(0.0, 10.0);
  std::normal_distribution<double> eps(0.0, 2.0);
  std::vector<double> x, y;
  for (int i = 0; i < 1000; ++i) {
    x.push_back(ux(g));
    y.push_back(3.0 * x.back() + eps(g));
  }
  const Regression reg = regress(x, y);
  const bool slope_ok = std::abs(reg.slope - 3.0) <= 0.3;

  const FitResult alpha_f = fit_lognormal(fa_f);
  const FitResult beta_f = fit_lognormal(fb_f);
  const bool degrade_ok = beta_f.r_squared < alpha_f.r_squared;

  return {moments_ok && bins_ok && slope_ok && degrade_ok,
          "fitted alpha mean/var " + fmt(fa.mean()) + "/" + fmt(fa.variance()) + ", beta " +
              fmt(fb.mean()) + "/" + fmt(fb.variance()) + " (worst rel. error " +
              fmt(100 * worst, 2) + "%); filtered bins within unfiltered: " +
              (bins_ok ? "yes" : "NO") + "; slope " + fmt(reg.slope) + "; filtered Q-Q R2 alpha " +
              fmt(alpha_f.r_squared) + " vs beta " + fmt(beta_f.r_squared) + " (n=" +
              std::to_string(filtered.size()) + ", beta must be lower: " +
              (degrade_ok ? "yes" : "NO") + ")"};
}

// ------------------------------------------------------------------ 8

Outcome knn_comparison() {
  const SynthSpec spec = loop_spec();
  const Field field = synth_field(spec);
  const Cell origin = synth_origin(spec);
  const auto first = knn_rule_comparison(field, origin, WalkParams{}, 300, 88, 1);
  const auto second = knn_rule_comparison(field, origin, WalkParams{}, 300, 88, 3);
  bool rules_ok = first.size() == 3 && first[0].rule == KnnRule::four &&
                  first[1].rule == KnnRule::eight && first[2].rule == KnnRule::twelve;
  bool same = first.size() == second.size();
  for (std::size_t i = 0; same && i < first.size(); ++i)
    same = dump_json(to_json(first[i])) == dump_json(to_json(second[i]));
  std::string detail;
  for (const auto& r : first)
    detail += "rule " + std::to_string(knn_rule_value(r.rule)) + ": dist " +
              fmt(r.mean_distance_m / 1000.0, 2) + " km, cov " + fmt(r.mean_coverage, 2) +
              ", home " + fmt(r.home_rate, 3) + "; ";
  return {rules_ok && same, detail + (same ? "rerun identical" : "rerun DIFFERS")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "range formula reproduction", range_formula},
      {2, "packing oracle equivalence", packing_oracle},
      {3, "siting partition and k-means optimality", siting},
      {4, "walker invariant suite", walker_invariants},
      {5, "biased walk beats importance-blind ablation", ablation},
      {6, "coverage algebra", coverage_algebra},
      {7, "sensitivity pipeline", sensitivity_pipeline},
      {8, "knn rule comparison", knn_comparison},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  int failures = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] criterion %d, %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
