// ikg: command-line front end.
//
// JSON goes to stdout (or --out) and is byte-identical for identical
// configurations. CSV and gnuplot outputs start with a comment header.
// Exit codes: 0 ok, 2 bad input or domain error, 3 unconverged result
// without --allow-warn.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>

#include "ikg/conjecture.hpp"
#include "ikg/correlation.hpp"
#include "ikg/io.hpp"
#include "ikg/rates.hpp"

using nlohmann::json;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitWarn = 3;

struct Options {
  int threads = 0;
  bool bits = false;
  std::string format = "json";
  std::string out;
  bool allow_warn = false;

  std::string variant = "bsc";
  double eps = 0.11;
  double f0 = 0.5;
  double g0 = 0.5;
  int grid_n = 201;
  double tol = 1e-8;
  int max_passes = 500;
  std::string rounds = "inf";

  std::string dist_file;
  std::string functional = "sigma";
  double s = 1.0;
  std::vector<double> s_values;
  double bisect_tol = 1e-5;
  double agree_tol = 1e-2;
  double grid_tol = 1e-6;
  double log_k = 0.0, log_w = 0.0, delta = 0.0, slope = -1.0;
  double step = 0.01;
  bool full_scale = false;
  bool progress = false;
  std::pair<double, double> f_range{0.0, 0.5}, g_range{0.0, 1.0}, eps_range{0.0, 0.5}, alpha_range{0.0, 0.5};
  double alpha = 0.11;
  int surface_n = 101;
  std::string prefix = "surface";
};

/// What a command hands back for printing.
struct Output {
  json config;
  json result;
  std::vector<std::string> warnings;
  std::function<void(std::ostream&)> table;  // csv / gnuplot body; null means key,value rows
};

ikg::Rounds parse_rounds(const std::string& s) {
  if (s == "inf" || s == "INF" || s == "infinity") return ikg::kInfiniteRounds;
  std::size_t used = 0;
  int r = -1;
  try {
    r = std::stoi(s, &used);
  } catch (const std::exception&) {
  }
  if (used != s.size() || r < 0) throw ikg::DomainError("rounds must be a nonnegative integer or inf");
  return r;
}

json rounds_json(ikg::Rounds r) { return r == ikg::kInfiniteRounds ? json("inf") : json(r); }

ikg::ParamFamily family(const Options& o) {
  if (o.variant == "bsc") return ikg::ParamFamily::bsc_kernel(o.eps, o.f0, o.g0);
  if (o.variant == "s3") return ikg::ParamFamily::support_three(o.f0, o.g0);
  throw ikg::DomainError("unknown family variant '" + o.variant + "'");
}

json family_json(const Options& o) {
  json j{{"variant", o.variant}, {"f0", o.f0}, {"g0", o.g0}};
  if (o.variant == "bsc") j["epsilon"] = o.eps;
  return j;
}

ikg::EnvelopeConfig envelope_config(const Options& o) {
  ikg::EnvelopeConfig cfg;
  cfg.grid_n = o.grid_n;
  cfg.sup_norm_tol = o.tol;
  cfg.max_passes = o.max_passes;
  cfg.threads = o.threads;
  cfg.validate();
  return cfg;
}

json envelope_json(const Options& o) {
  return {{"grid_n", o.grid_n}, {"sup_norm_tol", o.tol}, {"max_passes", o.max_passes}};
}

double unit(const Options& o) { return o.bits ? 1.0 / ikg::kLn2 : 1.0; }

ikg::AxisRange axis(const std::pair<double, double>& p) { return {p.first, p.second}; }

json range_json(const std::pair<double, double>& p) { return json::array({p.first, p.second}); }

// ---------------------------------------------------------------------------

Output cmd_info(const Options& o) {
  std::ifstream in(o.dist_file);
  if (!in) throw ikg::InvalidDistribution("cannot open '" + o.dist_file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const ikg::JointDist p = ikg::joint_from_json_text(ss.str());
  const double u = unit(o);
  const auto comps = ikg::connected_components(p);
  Output out;
  out.config = {{"file", o.dist_file}};
  out.result = {{"rows", p.rows()},
                {"cols", p.cols()},
                {"H_XY", ikg::joint_entropy(p) * u},
                {"H_X", ikg::entropy_x(p) * u},
                {"H_Y", ikg::entropy_y(p) * u},
                {"I_XY", ikg::mutual_information(p) * u},
                {"conditional_sum", ikg::conditional_entropy_sum(p) * u},
                {"rho_m", ikg::maximal_correlation(p)},
                {"components", comps.count},
                {"indecomposable", comps.is_indecomposable()}};
  return out;
}

Output cmd_envelope(const Options& o) {
  const auto fam = family(o);
  const auto cfg = envelope_config(o);
  const ikg::Rounds r = parse_rounds(o.rounds);
  const auto grid = ikg::ChartGrid::uniform(fam, cfg.grid_n);
  ikg::GridFunctional fn0 = [&] {
    if (o.functional == "omega") return ikg::omega0_grid(grid, o.s);
    if (o.functional == "sigma") return ikg::sigma0_grid(grid);
    throw ikg::DomainError("functional must be omega or sigma");
  }();
  const ikg::EnvelopeResult env = ikg::apply_rounds(fn0, r, cfg);
  const double u = unit(o);
  auto scaled = std::make_shared<ikg::GridFunctional>(env.fn);
  for (auto& v : scaled->values())
    if (v) *v *= u;

  Output out;
  out.config = {{"family", family_json(o)}, {"envelope", envelope_json(o)}, {"functional", o.functional},
                {"rounds", rounds_json(r)}};
  if (o.functional == "omega") out.config["s"] = o.s;
  const ikg::ExtReal& base = scaled->at_base();
  out.result = {{"base_value", base ? json(*base) : json("-inf")},
                {"passes", env.passes},
                {"converged", env.converged},
                {"last_delta", ikg::json_number(env.last_delta)},
                {"grid", ikg::grid_to_json(*scaled)}};
  if (!env.converged) out.warnings.push_back("envelope did not converge within max_passes");
  const std::string fmt = o.format;
  out.table = [scaled, fmt](std::ostream& os) {
    if (fmt == "csv") {
      ikg::write_grid_csv(os, *scaled);
    } else {
      ikg::write_grid_gnuplot(os, *scaled);
    }
  };
  return out;
}

Output cmd_region(const Options& o) {
  const auto fam = family(o);
  const auto cfg = envelope_config(o);
  const ikg::Rounds r = parse_rounds(o.rounds);
  const auto grid = ikg::ChartGrid::uniform(fam, cfg.grid_n);
  const auto th = ikg::s_star(grid, r, cfg, o.bisect_tol);
  const auto slopes = th.s_star > 0.0 ? ikg::region_slopes(th.s_star) : ikg::geometric_slopes();
  std::vector<double> s_values;
  for (double S : o.s_values) s_values.push_back(S / unit(o));
  auto b = std::make_shared<ikg::RateRegionBoundary>(ikg::rate_region_boundary(grid, r, slopes, s_values, cfg));
  const double u = unit(o);
  for (auto& p : b->points) {
    p.S *= u;
    p.R *= u;
  }
  for (auto& l : b->lines) l.phi *= u;
  b->mutual_information *= u;
  b->max_line_disagreement *= u;

  Output out;
  out.config = {{"family", family_json(o)}, {"envelope", envelope_json(o)}, {"rounds", rounds_json(r)},
                {"bisect_tol", o.bisect_tol}, {"S_values", o.s_values}};
  out.result = ikg::boundary_to_json(*b);
  out.result["s_star"] = th.s_star;
  out.warnings = b->warnings;
  if (!th.converged) out.warnings.push_back("envelope did not converge during threshold search");
  const std::string fmt = o.format;
  out.table = [b, fmt](std::ostream& os) {
    if (fmt == "csv") {
      ikg::write_boundary_csv(os, *b);
    } else {
      ikg::write_boundary_gnuplot(os, *b);
    }
  };
  return out;
}

Output cmd_kbib(const Options& o) {
  const auto cfg = envelope_config(o);
  const ikg::Rounds r = parse_rounds(o.rounds);
  const auto k = ikg::kbib(family(o), r, cfg, o.bisect_tol);
  Output out;
  out.config = {{"family", family_json(o)}, {"envelope", envelope_json(o)}, {"rounds", rounds_json(r)},
                {"bisect_tol", o.bisect_tol}};
  out.result = {{"gamma", ikg::json_number(k.gamma)},
                {"infinite", k.infinite},
                {"s_star", k.threshold.s_star},
                {"bracket", json::array({k.threshold.lo, k.threshold.hi})},
                {"iterations", k.threshold.iterations},
                {"converged", k.threshold.converged}};
  if (!k.threshold.converged) out.warnings.push_back("envelope did not converge during threshold search");
  return out;
}

Output cmd_mimk(const Options& o) {
  const auto cfg = envelope_config(o);
  const ikg::Rounds r = parse_rounds(o.rounds);
  const auto grid = ikg::ChartGrid::uniform(family(o), cfg.grid_n);
  const auto a = ikg::mimk_sigma_route(grid, r, cfg);
  const auto b = ikg::mimk_limit_route(grid, r, ikg::default_limit_sequence(), cfg);
  const double u = unit(o);
  json est = json::array();
  for (double e : b.estimates) est.push_back(e * u);
  Output out;
  out.config = {{"family", family_json(o)}, {"envelope", envelope_json(o)}, {"rounds", rounds_json(r)},
                {"agree_tol", o.agree_tol}};
  out.result = {{"sigma_route", a.value * u},
                {"limit_route", b.value * u},
                {"difference", std::abs(a.value - b.value) * u},
                {"agree", std::abs(a.value - b.value) <= o.agree_tol},
                {"limit_s", b.s_seq},
                {"limit_estimates", est},
                {"monotone_tail", b.monotone_tail},
                {"converged", a.converged && b.converged}};
  out.warnings = b.warnings;
  if (!a.converged) out.warnings.push_back("sigma envelope did not converge");
  if (std::abs(a.value - b.value) > o.agree_tol) out.warnings.push_back("MIMK routes disagree");
  return out;
}

Output cmd_one_way(const Options& o) {
  const auto rep = ikg::one_way_check(family(o), envelope_config(o), o.grid_tol);
  const double u = unit(o);
  Output out;
  out.config = {{"family", family_json(o)}, {"envelope", envelope_json(o)}, {"grid_tol", o.grid_tol}};
  out.result = {{"sigma1", rep.sigma1 * u},
                {"sigma3", rep.sigma3 * u},
                {"sigma_inf", rep.sigma_inf * u},
                {"sigma1_transposed", rep.sigma1_transposed * u},
                {"conditional_sum", rep.conditional_sum * u},
                {"one_way_gap", rep.one_way_gap * u},
                {"one_way_optimal", rep.one_way_optimal},
                {"verdict", rep.one_way_optimal ? "one-way optimal" : "interaction helps"},
                {"converged", rep.converged}};
  if (!rep.converged) out.warnings.push_back("sigma_inf did not converge");
  return out;
}

Output cmd_converse(const Options& o) {
  Output out;
  out.config = {{"log_k", o.log_k}, {"log_w", o.log_w}, {"delta", o.delta}, {"units", o.bits ? "bits" : "nats"}};
  double s = o.slope;
  if (s < 0.0) {
    const ikg::Rounds r = parse_rounds(o.rounds);
    const auto th = ikg::s_star(family(o), r, envelope_config(o), o.bisect_tol);
    s = th.s_star;
    out.config["family"] = family_json(o);
    out.config["envelope"] = envelope_json(o);
    out.config["rounds"] = rounds_json(r);
    if (!th.converged) out.warnings.push_back("envelope did not converge during threshold search");
  } else {
    out.config["s"] = s;
  }
  const double u = unit(o);
  const auto cb = ikg::converse_bound(o.log_k / u, o.log_w / u, o.delta, s);
  out.result = {{"s", s},
                {"ratio_bound", ikg::json_number(cb.ratio_bound)},
                {"key_bound", ikg::json_number(cb.key_bound * u)},
                {"infinite", cb.infinite}};
  return out;
}

Output cmd_conjecture(const Options& o) {
  const double step = o.full_scale ? 0.001 : o.step;
  const ikg::SweepRanges ranges{axis(o.f_range), axis(o.g_range), axis(o.eps_range), axis(o.alpha_range)};
  const bool show = o.progress || o.full_scale;
  const std::size_t pairs = ranges.eps.values(step).size() * ranges.alpha.values(step).size();
  std::mutex mu;
  std::size_t last_pct = 0;
  const auto rep = ikg::gap_sweep(step, ranges, o.threads, [&](std::size_t done) {
    if (!show) return;
    const std::size_t pct = 100 * done / std::max<std::size_t>(pairs, 1);
    std::lock_guard<std::mutex> lock(mu);
    if (pct > last_pct) {
      last_pct = pct;
      std::cerr << "\rconjecture sweep " << pct << "%" << std::flush;
    }
  });
  if (show) std::cerr << '\n';
  std::cerr << "wall time " << rep.wall_time << " s\n";
  const auto audit = ikg::equality_point_audit(o.alpha, o.eps);
  Output out;
  out.config = {{"step", step},
                {"ranges", {{"f", range_json(o.f_range)}, {"g", range_json(o.g_range)},
                            {"epsilon", range_json(o.eps_range)}, {"alpha", range_json(o.alpha_range)}}},
                {"audit", {{"alpha", o.alpha}, {"epsilon", o.eps}}}};
  out.result = ikg::report_to_json(rep);
  out.result["nonnegative"] = rep.min_gap >= -1e-12;
  json pts = json::array();
  for (const auto& p : audit.points) pts.push_back(json::array({p[0], p[1]}));
  out.result["audit"] = {{"points", pts},
                         {"max_abs_gap", audit.max_abs_gap},
                         {"max_abs_gradient", audit.max_abs_gradient},
                         {"passed", audit.passed()}};
  return out;
}

Output cmd_surfaces(const Options& o, const std::string& hash_seed) {
  Output out;
  out.config = {{"alpha", o.alpha}, {"epsilon", o.eps}, {"grid_n", o.surface_n}, {"prefix", o.prefix}};
  const std::string hash = ikg::config_hash(out.config.dump() + hash_seed);
  json files = json::array();
  double min_gap = INFINITY;
  for (auto field : {ikg::SurfaceField::Omega0, ikg::SurfaceField::Chi, ikg::SurfaceField::Gap}) {
    const auto surf = ikg::surface(field, o.alpha, o.eps, o.surface_n);
    const std::string path = o.prefix + "_" + ikg::to_string(field) + ".dat";
    std::ofstream os(path);
    if (!os) throw ikg::DomainError("cannot write '" + path + "'");
    ikg::write_file_header(os, hash, std::string("surface ") + ikg::to_string(field));
    ikg::write_surface_gnuplot(os, surf);
    files.push_back(path);
    if (field == ikg::SurfaceField::Gap)
      for (double v : surf.values) min_gap = std::min(min_gap, v);
  }
  out.result = {{"files", files}, {"min_gap", min_gap}};
  return out;
}

Output cmd_reduced(const Options& o) {
  const auto rep = ikg::reduced_sweep(o.step, axis(o.alpha_range), axis(o.f_range), axis(o.g_range));
  Output out;
  out.config = {{"step", o.step},
                {"ranges", {{"alpha", range_json(o.alpha_range)}, {"f", range_json(o.f_range)},
                            {"g", range_json(o.g_range)}}}};
  out.result = {{"min_slack", ikg::json_number(rep.min_slack)},
                {"argmin", {{"alpha", rep.argmin_alpha}, {"f", rep.argmin_f}, {"g", rep.argmin_g}}},
                {"negative_count", rep.negative_count},
                {"cells_scanned", rep.cells_scanned},
                {"nonnegative", rep.min_slack >= -1e-12}};
  return out;
}

// ---------------------------------------------------------------------------

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "." + std::to_string(k), rows);
  } else if (j.is_number_float()) {
    rows.emplace_back(prefix, ikg::format_double(j.get<double>()));
  } else {
    rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

int emit(const Options& o, const std::string& command, Output out, const std::string& config_text) {
  out.config["units"] = o.bits ? "bits" : "nats";
  if (!config_text.empty()) out.config["config_file"] = config_text;
  const std::string hash = ikg::config_hash(command + out.config.dump());

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw ikg::DomainError("cannot write '" + o.out + "'");
  }
  std::ostream& os = o.out.empty() ? std::cout : file;
  if (o.format == "json") {
    const json doc{{"program", "ikg"},          {"version", ikg::kVersion}, {"command", command},
                   {"config", out.config},      {"config_hash", hash},      {"result", out.result},
                   {"warnings", out.warnings}};
    os << doc.dump(2) << '\n';
  } else {
    ikg::write_file_header(os, hash, command);
    os << "# config " << out.config.dump() << '\n';
    for (const auto& w : out.warnings) os << "# warning " << w << '\n';
    if (out.table) {
      out.table(os);
    } else {
      std::vector<std::pair<std::string, std::string>> rows;
      flatten(out.result, "", rows);
      const char sep = o.format == "csv" ? ',' : ' ';
      if (o.format == "csv") os << "key,value\n";
      for (const auto& [k, v] : rows) os << k << sep << v << '\n';
    }
  }
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
  if (!out.warnings.empty() && !o.allow_warn) return kExitWarn;
  return 0;
}

void add_family_options(CLI::App* app, Options& o) {
  app->add_option("--variant", o.variant, "Chart family: bsc or s3")->check(CLI::IsMember({"bsc", "s3"}));
  app->add_option("--eps,--epsilon", o.eps, "BSC kernel crossover probability");
  app->add_option("--f0", o.f0, "Base point f");
  app->add_option("--g0", o.g0, "Base point g");
}

void add_envelope_options(CLI::App* app, Options& o) {
  add_family_options(app, o);
  app->add_option("--grid-n", o.grid_n, "Grid nodes per axis (odd, >= 33)");
  app->add_option("--tol", o.tol, "Envelope sup-norm tolerance");
  app->add_option("--max-passes", o.max_passes, "Envelope pass cap");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Secret-key generation rate tools"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file of option defaults, echoed into the output");
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  app.add_flag("--bits", o.bits, "Report information quantities in bits");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "gnuplot"}));
  app.add_option("-o,--out", o.out, "Output file (default stdout)");
  app.add_flag("--allow-warn", o.allow_warn, "Exit 0 despite convergence warnings");
  app.fallthrough();

  auto* info = app.add_subcommand("info", "Entropies, mutual information and maximal correlation of a JSON distribution");
  info->add_option("file", o.dist_file, "Distribution file {\"matrix\": [[...], ...]}")->required();

  auto* env = app.add_subcommand("envelope", "Marginal concave envelope of omega_0^s or sigma_0 on the chart grid");
  add_envelope_options(env, o);
  env->add_option("--functional", o.functional, "omega or sigma")->check(CLI::IsMember({"omega", "sigma"}));
  env->add_option("--s", o.s, "Slope for omega");
  env->add_option("--rounds,-r", o.rounds, "Passes (integer) or inf");

  auto* region = app.add_subcommand("region", "Key-rate / communication-rate boundary R*(S)");
  add_envelope_options(region, o);
  region->add_option("--rounds,-r", o.rounds, "Rounds (integer) or inf");
  region->add_option("--S", o.s_values, "Communication rates to evaluate (default 101 points on [0, H])");
  region->add_option("--bisect-tol", o.bisect_tol, "Threshold bisection tolerance");

  auto* kbib = app.add_subcommand("kbib", "Key bits per interaction bit s*/(1-s*)");
  add_envelope_options(kbib, o);
  kbib->add_option("--rounds,-r", o.rounds, "Rounds (integer) or inf");
  kbib->add_option("--bisect-tol", o.bisect_tol, "Threshold bisection tolerance");

  auto* mimk = app.add_subcommand("mimk", "Minimum interactive communication for maximal key rate, two routes");
  add_envelope_options(mimk, o);
  mimk->add_option("--rounds,-r", o.rounds, "Rounds (integer) or inf");
  mimk->add_option("--agree-tol", o.agree_tol, "Allowed disagreement between routes");

  auto* oneway = app.add_subcommand("one-way", "Whether one-way communication attains the interactive MIMK");
  add_envelope_options(oneway, o);
  oneway->add_option("--grid-tol", o.grid_tol, "Grid tolerance of the verdict");

  auto* conv = app.add_subcommand("converse-bound", "Finite-length bound on key size per communication size");
  add_envelope_options(conv, o);
  conv->add_option("--log-k", o.log_k, "log|K|")->required();
  conv->add_option("--log-w", o.log_w, "log|W^r|")->required();
  conv->add_option("--delta", o.delta, "Error probability")->required();
  conv->add_option("--s", o.slope, "Region slope sup R/S (default: computed s*)");
  conv->add_option("--rounds,-r", o.rounds, "Rounds for the computed s*");
  conv->add_option("--bisect-tol", o.bisect_tol, "Threshold bisection tolerance");

  auto* conj = app.add_subcommand("conjecture", "Grid sweep of the binary conjecture inequality");
  conj->add_option("--step", o.step, "Grid step");
  conj->add_flag("--full-scale", o.full_scale, "Step 0.001 (long run)");
  conj->add_flag("--progress", o.progress, "Progress on stderr");
  conj->add_option("--f-range", o.f_range, "f range lo hi");
  conj->add_option("--g-range", o.g_range, "g range lo hi");
  conj->add_option("--eps-range", o.eps_range, "epsilon range lo hi");
  conj->add_option("--alpha-range", o.alpha_range, "alpha range lo hi");
  conj->add_option("--audit-alpha", o.alpha, "alpha of the equality-point audit");
  conj->add_option("--audit-eps", o.eps, "epsilon of the equality-point audit");

  auto* surf = app.add_subcommand("surfaces", "omega_0, chi and their gap over the open unit square");
  surf->add_option("--alpha", o.alpha, "Test-channel parameter");
  surf->add_option("--eps,--epsilon", o.eps, "Crossover probability");
  surf->add_option("--grid-n", o.surface_n, "Nodes per axis");
  surf->add_option("--prefix", o.prefix, "Output path prefix");

  auto* reduced = app.add_subcommand("reduced", "Grid check of the reduced inequality near epsilon = 1/2");
  reduced->add_option("--step", o.step, "Grid step");
  reduced->add_option("--alpha-range", o.alpha_range, "alpha range lo hi");
  reduced->add_option("--f-range", o.f_range, "f range lo hi");
  reduced->add_option("--g-range", o.g_range, "g range lo hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitDomain;
  }

  std::string config_text;
  if (const auto* cfg_opt = app.get_config_ptr(); cfg_opt && cfg_opt->count() > 0) {
    std::ifstream in(cfg_opt->as<std::string>());
    std::stringstream ss;
    ss << in.rdbuf();
    config_text = ss.str();
  }
  try {
    const std::string name = app.get_subcommands().front()->get_name();
    Output out;
    if (name == "info") out = cmd_info(o);
    else if (name == "envelope") out = cmd_envelope(o);
    else if (name == "region") out = cmd_region(o);
    else if (name == "kbib") out = cmd_kbib(o);
    else if (name == "mimk") out = cmd_mimk(o);
    else if (name == "one-way") out = cmd_one_way(o);
    else if (name == "converse-bound") out = cmd_converse(o);
    else if (name == "conjecture") out = cmd_conjecture(o);
    else if (name == "surfaces") out = cmd_surfaces(o, config_text);
    else if (name == "reduced") out = cmd_reduced(o);
    return emit(o, name, std::move(out), config_text);
  } catch (const ikg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
