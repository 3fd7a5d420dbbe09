#include "aidroute/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "aidroute/batch.hpp"
#include "aidroute/catalog_io.hpp"
#include "aidroute/coverage.hpp"
#include "aidroute/errors.hpp"
#include "aidroute/field.hpp"
#include "aidroute/fleet.hpp"
#include "aidroute/grid_io.hpp"
#include "aidroute/packing.hpp"
#include "aidroute/rng.hpp"
#include "aidroute/route_io.hpp"
#include "aidroute/sensitivity.hpp"
#include "aidroute/siting.hpp"
#include "aidroute/walker.hpp"

namespace aidroute {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Keys naming files or directories; relative values in a config file are
// resolved against the file's directory.
const std::set<std::string> kPathKeys = {
    "out",      "field_dir",   "altitude", "roads",      "importance_grid", "destinations",
    "drones",   "packages",    "plan",     "routes_dir", "results",         "experience_dir"};

const std::set<std::string> kKnownKeys = {
    // shared
    "out", "seed", "jobs", "field_dir",
    // build-field
    "altitude", "roads", "importance_grid", "road_buffer_m", "template", "template_rows",
    "template_cols", "template_cell_size_m", "template_margin", "template_spacing",
    "template_origin_lat", "template_origin_lon",
    // plan
    "destinations", "drones", "packages", "range_k", "k_max", "road_samples", "ga_population",
    "ga_generations", "weight_step", "kmeans_restarts", "delivery_multiplier", "recon_model",
    "recon_count", "relay_model", "relay_count", "packing_efficiency",
    // walk
    "plan", "base_index", "origin_row", "origin_col", "alpha", "beta", "mfd_m", "knn_rule",
    "decay", "max_proposals", "max_climb_m", "road_attraction", "home_attraction", "batch",
    "top_n", "lognormal_params", "experience_dir", "experience_top_fraction",
    // pair
    "routes_dir", "ccr_area",
    // sensitivity
    "results", "threshold", "knn_n", "bins", "mean_alpha", "var_alpha", "mean_beta", "var_beta"};

class Config {
 public:
  void merge_file(const fs::path& path) {
    const std::string text = read_text_file(path, "config file");
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("config file: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    const fs::path base = path.parent_path();
    for (auto& [key, value] : j.items()) {
      if (kPathKeys.count(key) && value.is_string()) {
        const fs::path p(value.get<std::string>());
        value = p.is_relative() ? (base / p).lexically_normal().string() : p.string();
      }
      set(key, value);
    }
  }

  void set(const std::string& key, json value) {
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
    if (value.is_object() || value.is_array())
      throw ConfigError("config key '" + key + "' must be a scalar");
    j_[key] = std::move(value);
  }

  // key=value; the value is read as JSON when it parses, else as a string.
  void set_assignment(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set expects key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded() || value.is_object() || value.is_array()) value = raw;
    set(key, value);
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  template <typename T>
  std::optional<T> opt(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
        if constexpr (std::is_unsigned_v<T>)
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
            throw ConfigError("");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("");
      } else {
        if (!v.is_string()) throw ConfigError("");
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "' has the wrong type");
    }
  }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    return opt<T>(key).value_or(fallback);
  }

  template <typename T>
  T require(const std::string& key) const {
    auto v = opt<T>(key);
    if (!v) throw ConfigError("missing config key '" + key + "'");
    return *v;
  }

  fs::path path(const std::string& key) const { return fs::path(require<std::string>(key)); }

  fs::path out_dir() const { return fs::path(get<std::string>("out", ".")); }
  fs::path field_dir() const {
    return has("field_dir") ? path("field_dir") : out_dir();
  }
  std::uint64_t seed() const {
    if (!has("seed")) throw ConfigError("a master seed is required (--seed or config 'seed')");
    return require<std::uint64_t>("seed");
  }
  std::size_t jobs() const { return std::max<std::size_t>(1, get<std::size_t>("jobs", 1)); }

 private:
  json j_ = json::object();
};

void write_json(const fs::path& path, const ordered_json& j) { write_text_file(path, dump_json(j)); }

// ---------------------------------------------------------------- field

SynthSpec synth_spec_from(const Config& cfg) {
  SynthSpec s;
  s.name = cfg.require<std::string>("template");
  s.n_rows = cfg.get<int>("template_rows", s.n_rows);
  s.n_cols = cfg.get<int>("template_cols", s.n_cols);
  s.cell_size_m = cfg.get<double>("template_cell_size_m", s.cell_size_m);
  s.margin = cfg.get<int>("template_margin", s.margin);
  s.spacing = cfg.get<int>("template_spacing", s.spacing);
  s.origin_lat = cfg.get<double>("template_origin_lat", s.origin_lat);
  s.origin_lon = cfg.get<double>("template_origin_lon", s.origin_lon);
  return s;
}

Field load_field(const fs::path& dir) {
  const GridLayer alt = read_grid_file(dir / "altitude.asc", "altitude grid");
  const GridLayer imp = read_grid_file(dir / "importance.asc", "importance grid");
  return Field::from_layers(alt, imp);
}

std::optional<ordered_json> load_meta(const fs::path& dir) {
  const fs::path p = dir / "meta.json";
  if (!fs::exists(p)) return std::nullopt;
  try {
    return ordered_json::parse(read_text_file(p, "field metadata"));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("field metadata: ") + e.what());
  }
}

int cmd_build_field(const Config& cfg, std::ostream& out) {
  std::optional<Field> field;
  ordered_json source;
  std::optional<Cell> suggested_origin;
  if (cfg.has("template")) {
    const SynthSpec spec = synth_spec_from(cfg);
    field.emplace(synth_field(spec));
    suggested_origin = synth_origin(spec);
    source = {{"template", spec.name}};
  } else {
    const fs::path alt_path = cfg.path("altitude");
    const GridLayer alt = read_grid_file(alt_path, "altitude grid");
    if (cfg.has("importance_grid")) {
      const fs::path imp_path = cfg.path("importance_grid");
      field.emplace(Field::from_layers(alt, read_grid_file(imp_path, "importance grid")));
      source = {{"altitude", alt_path.string()}, {"importance_grid", imp_path.string()}};
    } else {
      if (!cfg.has("roads")) throw ConfigError("build-field needs 'roads' or 'importance_grid'");
      const fs::path roads_path = cfg.path("roads");
      const auto roads = parse_polylines(read_text_file(roads_path, "roads file"));
      const double buffer = cfg.get<double>("road_buffer_m", 50.0);
      if (!(buffer >= 0.0)) throw ConfigError("road_buffer_m must be non-negative");
      field.emplace(alt.meta, alt.values, rasterize_roads(roads, alt.meta, buffer));
      source = {{"altitude", alt_path.string()},
                {"roads", roads_path.string()},
                {"road_buffer_m", buffer}};
    }
  }

  const fs::path dir = cfg.out_dir();
  write_text_file(dir / "altitude.asc", serialize_grid(field->altitude_grid()));
  write_text_file(dir / "importance.asc", serialize_grid(field->importance_grid()));
  const GridMeta& m = field->meta();
  ordered_json meta{{"n_rows", m.n_rows},           {"n_cols", m.n_cols},
                    {"cell_size_m", m.cell_size_m}, {"origin_lat", m.origin_lat},
                    {"origin_lon", m.origin_lon},   {"nodata", m.nodata},
                    {"road_cells", field->road_cell_count()}, {"source", source}};
  if (suggested_origin)
    meta["origin_cell"] = {{"row", suggested_origin->row}, {"col", suggested_origin->col}};
  write_json(dir / "meta.json", meta);
  out << "field " << m.n_rows << "x" << m.n_cols << ", " << field->road_cell_count()
      << " road cells -> " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- plan

std::vector<DroneSpec> load_catalog(const Config& cfg) {
  if (!cfg.has("drones")) return default_drone_catalog();
  return parse_drone_catalog(read_text_file(cfg.path("drones"), "drone catalog"));
}

PackageCatalog load_packages(const Config& cfg) {
  if (!cfg.has("packages")) return PackageCatalog{};
  return parse_package_catalog(read_text_file(cfg.path("packages"), "package catalog"));
}

const DroneSpec& require_drone(const std::vector<DroneSpec>& catalog, const std::string& model) {
  const DroneSpec* d = find_drone(catalog, model);
  if (!d) throw ConfigError("drone model '" + model + "' is not in the catalog");
  return *d;
}

int cmd_plan(const Config& cfg, std::ostream& out) {
  const std::uint64_t seed = cfg.seed();
  const auto dests =
      parse_destinations(read_text_file(cfg.path("destinations"), "destinations file"));
  if (dests.empty()) throw InputError("destinations file lists no destination");
  const auto catalog = load_catalog(cfg);
  const PackageCatalog packages = load_packages(cfg);
  const Field field = load_field(cfg.field_dir());

  RangeModel model;
  model.k = cfg.get<double>("range_k", model.k);
  model.validate();

  GAConfig ga;
  ga.population = cfg.get<std::size_t>("ga_population", ga.population);
  ga.generations = cfg.get<std::size_t>("ga_generations", ga.generations);
  ga.seed = derive_seed(seed, 1);
  ga.validate();

  const PlanTable table = enumerate_plans(dests, catalog, packages.meds, model, ga);

  const auto road_points = sample_road_points(field, cfg.get<std::size_t>("road_samples", 300));
  OversampleOptions os;
  os.weight_step = cfg.get<double>("weight_step", os.weight_step);
  if (!(os.weight_step > 1.0)) throw ConfigError("weight_step must exceed 1");
  os.kmeans.restarts = cfg.get<std::size_t>("kmeans_restarts", os.kmeans.restarts);
  os.seed = derive_seed(seed, 2);
  const std::size_t k_max = cfg.get<std::size_t>("k_max", 3);
  if (k_max < 1) throw ConfigError("k_max must be at least 1");

  SelectKResult sel = select_k(dests, road_points, table, k_max, os);

  FleetPolicy policy;
  policy.delivery_multiplier = cfg.get<int>("delivery_multiplier", policy.delivery_multiplier);
  policy.recon_model = cfg.get<std::string>("recon_model", policy.recon_model);
  policy.recon_count = cfg.get<int>("recon_count", policy.recon_count);
  policy.relay_model = cfg.get<std::string>("relay_model", policy.relay_model);
  policy.relay_count = cfg.get<int>("relay_count", policy.relay_count);
  assign_drones(sel.plan, table, policy);

  const double efficiency = cfg.get<double>("packing_efficiency", 1.0);
  if (!(efficiency > 0.0 && efficiency <= 1.0))
    throw ConfigError("packing_efficiency must lie in (0, 1]");

  ordered_json containers = ordered_json::array();
  for (std::size_t ci = 0; ci < sel.plan.clusters.size(); ++ci) {
    const ClusterPlan& c = sel.plan.clusters[ci];
    MedCounts ratio{};
    std::array<double, 3> demand{};
    for (const auto& name : c.destinations) {
      const auto it = std::find_if(dests.begin(), dests.end(),
                                   [&](const Destination& d) { return d.name == name; });
      for (int i = 0; i < 3; ++i) {
        ratio[i] += it->daily[i];
        demand[i] += it->daily[i];
      }
    }
    std::vector<std::pair<std::string, int>> counts(c.drones.begin(), c.drones.end());
    const ContainerConfig cc = configure_container(kIso20ftInterior, counts, packages.crates,
                                                   ratio, packages.meds, demand, efficiency);
    ordered_json cj = to_json(cc);
    cj["base"] = ci;
    containers.push_back(std::move(cj));
  }

  // Drones fly between bases empty; a base pair is linked when the recon
  // model can make the hop.
  const DroneSpec& recon = require_drone(catalog, policy.recon_model);
  ordered_json transfers = ordered_json::array();
  for (std::size_t a = 0; a < sel.plan.clusters.size(); ++a)
    for (std::size_t b = a + 1; b < sel.plan.clusters.size(); ++b) {
      const LatLon pa = sel.plan.clusters[a].centroid;
      const LatLon pb = sel.plan.clusters[b].centroid;
      transfers.push_back({{"from", a},
                           {"to", b},
                           {"drone", recon.model},
                           {"distance_km", haversine_km(pa, pb)},
                           {"feasible", transfer_feasible(pa, pb, recon, model, 0.0)}});
    }

  ordered_json attempts = ordered_json::array();
  for (const auto& a : sel.attempts)
    attempts.push_back({{"k", a.k}, {"feasible", a.feasible}, {"destination_weight", a.weight}});

  const fs::path dir = cfg.out_dir();
  for (const auto& row : table.rows) {
    const auto boxes = plan_boxes(row.plan, packages.meds);
    write_text_file(dir / "witness" / (row.destination + "_" + row.drone + ".csv"),
                    packing_witness_csv(boxes, row.witness));
  }
  ordered_json doc{{"seed", seed},
                   {"range_k", model.k},
                   {"plans", to_json(table)},
                   {"k_attempts", attempts},
                   {"base_plan", to_json(sel.plan)},
                   {"containers", containers},
                   {"transfers", transfers}};
  write_json(dir / "plan.json", doc);

  out << "k=" << sel.plan.k << ":";
  for (const auto& c : sel.plan.clusters) {
    out << " {";
    for (std::size_t i = 0; i < c.destinations.size(); ++i)
      out << (i ? "," : "") << c.destinations[i];
    out << "}";
  }
  out << "\n";
  return 0;
}

// ---------------------------------------------------------------- walk

Cell nearest_open_cell(const Field& field, Cell c) {
  if (field.in_bounds(c) && !field.is_void(c)) return c;
  const GridMeta& m = field.meta();
  std::optional<Cell> best;
  long long best_d = std::numeric_limits<long long>::max();
  for (std::size_t i = 0; i < m.cell_count(); ++i) {
    const Cell o = m.cell_at(i);
    if (field.is_void(o)) continue;
    const long long dr = o.row - c.row;
    const long long dc = o.col - c.col;
    const long long d = dr * dr + dc * dc;
    if (d < best_d) {
      best_d = d;
      best = o;
    }
  }
  if (!best) throw InputError("the field has no open cell");
  return *best;
}

Cell resolve_origin(const Config& cfg, const Field& field) {
  if (cfg.has("origin_row") || cfg.has("origin_col"))
    return {cfg.require<int>("origin_row"), cfg.require<int>("origin_col")};

  const fs::path plan_path = cfg.has("plan") ? cfg.path("plan") : cfg.out_dir() / "plan.json";
  if (cfg.has("plan") || cfg.has("base_index") || fs::exists(plan_path)) {
    ordered_json plan;
    try {
      plan = ordered_json::parse(read_text_file(plan_path, "plan file"));
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("plan file: ") + e.what());
    }
    const std::size_t base = cfg.get<std::size_t>("base_index", 0);
    try {
      const auto& bases = plan.at("base_plan").at("bases");
      if (base >= bases.size())
        throw ConfigError("base_index " + std::to_string(base) + " out of range");
      const auto& c = bases.at(base).at("centroid");
      const LatLon p{c.at("lat").get<double>(), c.at("lon").get<double>()};
      return nearest_open_cell(field, latlon_to_cell(field.meta(), p));
    } catch (const json::exception& e) {
      throw ParseError(std::string("plan file: ") + e.what());
    }
  }

  if (auto meta = load_meta(cfg.field_dir()); meta && meta->contains("origin_cell")) {
    const auto& o = meta->at("origin_cell");
    return {o.at("row").get<int>(), o.at("col").get<int>()};
  }
  throw ConfigError("no walk origin: set origin_row/origin_col, a plan, or build a template field");
}

WalkParams walk_params_from(const Config& cfg) {
  WalkParams p;
  p.alpha = cfg.get<double>("alpha", p.alpha);
  p.beta = cfg.get<double>("beta", p.beta);
  if (cfg.has("mfd_m")) {
    p.mfd_m = cfg.require<double>("mfd_m");
  } else {
    const auto catalog = load_catalog(cfg);
    p.mfd_m = mfd_m(require_drone(catalog, cfg.get<std::string>("recon_model", "B")));
  }
  p.knn_rule = knn_rule_from_int(cfg.get<int>("knn_rule", 8));
  p.decay = cfg.get<double>("decay", p.decay);
  if (cfg.has("max_proposals")) p.max_proposals = cfg.require<std::uint64_t>("max_proposals");
  if (cfg.has("max_climb_m")) p.max_climb_m = cfg.require<double>("max_climb_m");
  p.road_attraction = cfg.get<bool>("road_attraction", true);
  p.home_attraction = cfg.get<bool>("home_attraction", true);
  p.validate();
  return p;
}

ParamDist param_dist_from(const Config& cfg) {
  ParamDist d;
  d.mean_alpha = cfg.get<double>("mean_alpha", d.mean_alpha);
  d.var_alpha = cfg.get<double>("var_alpha", d.var_alpha);
  d.mean_beta = cfg.get<double>("mean_beta", d.mean_beta);
  d.var_beta = cfg.get<double>("var_beta", d.var_beta);
  d.validate();
  return d;
}

struct LoadedRoute {
  std::string id;
  RouteResult route;
};

// Every <id>.json summary in dir with its <id>.csv cells, sorted by id.
std::vector<LoadedRoute> load_routes(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw NotFoundError("routes directory not found: " + dir.string());
  std::vector<fs::path> summaries;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") summaries.push_back(e.path());
  std::sort(summaries.begin(), summaries.end());
  std::vector<LoadedRoute> out;
  for (const auto& s : summaries) {
    LoadedRoute lr;
    lr.id = s.stem().string();
    lr.route = parse_route_summary(read_text_file(s, "route summary"));
    fs::path csv = s;
    csv.replace_extension(".csv");
    lr.route.cells = parse_route_csv(read_text_file(csv, "route cells"));
    out.push_back(std::move(lr));
  }
  return out;
}

std::vector<RouteResult> execute_walks(const Config& cfg, const Field& field, Cell origin,
                                       const WalkParams& params, std::size_t count,
                                       std::uint64_t seed, bool lognormal) {
  std::vector<ParamSample> draws;
  if (lognormal) draws = sample_params(param_dist_from(cfg), count, derive_seed(seed, 3));
  std::optional<BonusLayer> bonus;
  if (cfg.has("experience_dir")) {
    std::vector<RouteResult> prior;
    for (auto& lr : load_routes(cfg.path("experience_dir")))
      if (lr.route.is_home()) prior.push_back(std::move(lr.route));
    bonus = experience_bonus(prior, field, cfg.get<double>("experience_top_fraction", 0.1));
  }
  std::function<void(std::size_t, WalkParams&)> customize;
  if (lognormal)
    customize = [&draws](std::size_t i, WalkParams& p) {
      p.alpha = draws[i].alpha;
      p.beta = draws[i].beta;
    };
  return run_walks(field, origin, params, count, seed, cfg.jobs(), customize,
                   bonus ? &*bonus : nullptr);
}

int cmd_walk(const Config& cfg, std::ostream& out) {
  const std::uint64_t seed = cfg.seed();
  const Field field = load_field(cfg.field_dir());
  const Cell origin = resolve_origin(cfg, field);
  const WalkParams params = walk_params_from(cfg);
  const std::size_t batch = cfg.get<std::size_t>("batch", 10000);
  if (batch < 1) throw ConfigError("batch must be at least 1");
  const std::size_t top_n = cfg.get<std::size_t>("top_n", 10);

  const auto results =
      execute_walks(cfg, field, origin, params, batch, seed, cfg.get<bool>("lognormal_params", false));

  const fs::path dir = cfg.out_dir();
  write_text_file(dir / "results.csv", results_csv(results));

  std::vector<std::size_t> home;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (results[i].is_home()) home.push_back(i);
  std::stable_sort(home.begin(), home.end(), [&](std::size_t a, std::size_t b) {
    return results[a].coverage > results[b].coverage;
  });
  if (home.size() > top_n) home.resize(top_n);

  const fs::path routes_dir = dir / "routes";
  if (fs::exists(routes_dir))
    for (const auto& e : fs::directory_iterator(routes_dir))
      if (e.path().extension() == ".json" || e.path().extension() == ".csv") fs::remove(e.path());
  fs::create_directories(routes_dir);
  std::vector<std::vector<Cell>> drawn;
  for (std::size_t rank = 0; rank < home.size(); ++rank) {
    const RouteResult& r = results[home[rank]];
    char id[32];
    std::snprintf(id, sizeof id, "walk_%06zu", home[rank]);
    write_text_file(routes_dir / (std::string(id) + ".csv"), route_csv(r, field.meta()));
    write_json(routes_dir / (std::string(id) + ".json"), route_summary_json(r));
    drawn.push_back(r.cells);
  }
  if (!drawn.empty()) drawn.resize(1);
  write_text_file(dir / "best_route.pgm", render_pgm(field, drawn));

  std::array<std::size_t, 3> by_scenario{};
  for (const auto& r : results) ++by_scenario[static_cast<int>(r.scenario)];
  write_json(dir / "walk_summary.json",
             ordered_json{{"seed", seed},
                          {"origin", {{"row", origin.row}, {"col", origin.col}}},
                          {"walks", results.size()},
                          {"trapped", by_scenario[0]},
                          {"exhausted", by_scenario[1]},
                          {"home", by_scenario[2]},
                          {"exported", home.size()}});
  out << results.size() << " walks, " << by_scenario[2] << " home, " << home.size()
      << " exported\n";
  return 0;
}

// ---------------------------------------------------------------- pair

CcrArea parse_ccr_area(const std::string& s) {
  if (s == "road") return CcrArea::road;
  if (s == "all") return CcrArea::all;
  throw ConfigError("ccr_area must be 'road' or 'all'");
}

int cmd_pair(const Config& cfg, std::ostream& out) {
  const Field field = load_field(cfg.field_dir());
  const fs::path routes_dir = cfg.has("routes_dir") ? cfg.path("routes_dir") : cfg.out_dir() / "routes";
  const auto loaded = load_routes(routes_dir);
  std::vector<RouteResult> routes;
  for (const auto& lr : loaded) routes.push_back(lr.route);
  const KnnRule rule = knn_rule_from_int(cfg.get<int>("knn_rule", 8));
  const CcrArea area = parse_ccr_area(cfg.get<std::string>("ccr_area", "road"));

  const PairResult best = best_pair(routes, field, rule, area);
  ordered_json report = to_json(best.report);
  report["knn_rule"] = knn_rule_value(rule);
  report["ccr_area"] = area == CcrArea::road ? "road" : "all";
  report["routes"] = {loaded[best.first].id, loaded[best.second].id};
  const fs::path dir = cfg.out_dir();
  write_json(dir / "pair.json", report);
  const std::vector<std::vector<Cell>> drawn{routes[best.first].cells, routes[best.second].cells};
  write_text_file(dir / "pair.pgm", render_pgm(field, drawn));

  out << loaded[best.first].id << " + " << loaded[best.second].id << ": ccr ";
  if (best.report.ccr)
    out << format_fixed(*best.report.ccr, 4);
  else
    out << "undefined";
  out << "\n";
  return 0;
}

// ---------------------------------------------------------------- sensitivity

template <typename Fn>
ordered_json guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const InputError& e) {
    return ordered_json{{"error", e.what()}};
  }
}

int cmd_sensitivity(const Config& cfg, std::ostream& out) {
  const std::uint64_t seed = cfg.seed();
  std::optional<Field> field;
  std::optional<Cell> origin;
  auto need_field = [&]() {
    if (!field) {
      field.emplace(load_field(cfg.field_dir()));
      origin = resolve_origin(cfg, *field);
    }
  };

  std::vector<RouteResult> results;
  if (cfg.has("results")) {
    results = parse_results_csv(read_text_file(cfg.path("results"), "results file"));
  } else {
    need_field();
    const std::size_t batch = cfg.get<std::size_t>("batch", 10000);
    if (batch < 1) throw ConfigError("batch must be at least 1");
    results = execute_walks(cfg, *field, *origin, walk_params_from(cfg), batch, seed, true);
  }

  std::vector<RouteResult> home;
  for (const auto& r : results)
    if (r.is_home()) home.push_back(r);
  const double threshold =
      cfg.has("threshold") ? cfg.require<double>("threshold") : median_home_coverage(results);
  const auto filtered = filter_by_coverage(results, threshold);

  auto column = [](const std::vector<RouteResult>& rs, double RouteResult::*m) {
    std::vector<double> v;
    v.reserve(rs.size());
    for (const auto& r : rs) v.push_back(r.*m);
    return v;
  };
  const auto a_all = column(results, &RouteResult::alpha);
  const auto b_all = column(results, &RouteResult::beta);
  const auto a_f = column(filtered, &RouteResult::alpha);
  const auto b_f = column(filtered, &RouteResult::beta);

  const std::size_t bins = cfg.get<std::size_t>("bins", 20);
  if (bins < 1) throw ConfigError("bins must be at least 1");
  auto hist_pair = [&](const std::vector<double>& all, const std::vector<double>& sub) {
    const double hi = all.empty() ? 1.0 : *std::max_element(all.begin(), all.end());
    const double top = hi > 0.0 ? hi : 1.0;
    return ordered_json{{"all", to_json(histogram(all, 0.0, top, bins))},
                        {"filtered", to_json(histogram(sub, 0.0, top, bins))}};
  };
  auto fit = [](const std::vector<double>& v) {
    return guarded([&] { return to_json(fit_lognormal(v)); });
  };

  ordered_json fit_doc{{"threshold", threshold},
                       {"results", results.size()},
                       {"home", home.size()},
                       {"filtered", filtered.size()},
                       {"alpha", {{"all", fit(a_all)}, {"filtered", fit(a_f)}}},
                       {"beta", {{"all", fit(b_all)}, {"filtered", fit(b_f)}}},
                       {"histograms", {{"alpha", hist_pair(a_all, a_f)}, {"beta", hist_pair(b_all, b_f)}}}};

  const auto a_home = column(home, &RouteResult::alpha);
  const auto b_home = column(home, &RouteResult::beta);
  const auto c_home = column(home, &RouteResult::coverage);
  ordered_json reg_doc{
      {"routes", home.size()},
      {"alpha", guarded([&] { return to_json(regress(a_home, c_home)); })},
      {"beta", guarded([&] { return to_json(regress(b_home, c_home)); })}};

  need_field();
  const std::size_t knn_n = cfg.get<std::size_t>("knn_n", 100);
  if (knn_n < 1) throw ConfigError("knn_n must be at least 1");
  const auto rows =
      knn_rule_comparison(*field, *origin, walk_params_from(cfg), knn_n, derive_seed(seed, 4), cfg.jobs());
  ordered_json knn_rows = ordered_json::array();
  for (const auto& r : rows) knn_rows.push_back(to_json(r));
  const ordered_json knn_doc{{"walks_per_rule", knn_n}, {"rules", knn_rows}};

  const fs::path dir = cfg.out_dir();
  write_json(dir / "fit.json", fit_doc);
  write_json(dir / "regression.json", reg_doc);
  write_json(dir / "knn.json", knn_doc);
  out << results.size() << " results, " << filtered.size() << " above threshold "
      << format_double(threshold) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Disaster-relief drone base planning and reconnaissance route search", "aidroute"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string out_dir;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "Flat JSON config file");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--jobs", jobs, "Worker threads");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--set", sets, "Override a config key (key=value)");
  app.fallthrough();

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Config&, std::ostream&);
  };
  const Sub subs[] = {
      {"build-field", "Rasterize roads over an altitude grid", &cmd_build_field},
      {"plan", "Choose bases and configure containers", &cmd_plan},
      {"walk", "Run a batch of reconnaissance walks", &cmd_walk},
      {"pair", "Find the best pair of home routes", &cmd_pair},
      {"sensitivity", "Parameter fits, regressions and stencil comparison", &cmd_sensitivity}};
  std::vector<CLI::App*> handles;
  for (const auto& s : subs) handles.push_back(app.add_subcommand(s.name, s.help));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 3;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg.merge_file(config_path);
    for (const auto& s : sets) cfg.set_assignment(s);
    if (seed) cfg.set("seed", *seed);
    if (jobs) cfg.set("jobs", *jobs);
    if (!out_dir.empty()) cfg.set("out", out_dir);
    for (std::size_t i = 0; i < handles.size(); ++i)
      if (handles[i]->parsed()) return subs[i].run(cfg, out);
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace aidroute
