#include "entrolab/experiment.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "entrolab/errors.hpp"
#include "entrolab/measures.hpp"
#include "entrolab/spectrum.hpp"
#include "entrolab/symbolic.hpp"

namespace entrolab {

namespace {

using io::Json;

struct TaskOutput {
  Json result;
  bool certified = true;
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::optional<EntropyTable> plot;
};

struct Context {
  const Json& config;
  const RunOptions& options;
  bool used_seed = false;

  const Json& get(const char* key) const {
    if (!config.contains(key)) throw ValidationError(std::string("config is missing \"") + key + "\"");
    return config.at(key);
  }
  template <class T>
  T value_or(const char* key, T fallback) const {
    return config.contains(key) ? config.at(key).get<T>() : fallback;
  }
  Operator op() const { return io::parse_operator(get("operator")); }
  SpaceSpec space(SpaceSpec fallback = SpaceSpec::lp(2.0)) const {
    return config.contains("space") ? io::parse_space(config.at("space")) : fallback;
  }
  std::uint64_t seed() {
    used_seed = true;
    if (options.seed) return *options.seed;
    if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
    throw ValidationError("this task is randomized: pass --seed or set \"seed\" in the config");
  }
};

Json eigen_json(const std::vector<Eigenvalue>& eig) {
  Json out = Json::array();
  for (const auto& e : eig) {
    out.push_back({{"value", io::to_json(e.value)}, {"multiplicity", e.multiplicity}, {"log_modulus", e.log_modulus}});
  }
  return out;
}

Json complex_list(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(io::to_json(z));
  return out;
}

TaskOutput spectral_entropy_task(Context& ctx) {
  const SpectralData sd = spectrum(ctx.op());
  const double h = spectral_entropy(sd);
  TaskOutput out;
  out.result = {{"h_top", h},
                {"h_top_log2", h / std::numbers::ln2},
                {"eigenvalues", eigen_json(sd.eigenvalues)},
                {"complete", sd.complete},
                {"tail_sup", sd.tail_sup},
                {"spectral_radius", sd.spectral_radius},
                {"provenance", sd.provenance == Provenance::closed_form ? "closed_form" : "numeric"}};
  return out;
}

CompactSample parse_sample(Context& ctx, const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "grid") {
    return unit_cube_grid(j.at("dim").get<std::size_t>(), j.at("per_axis").get<std::size_t>());
  }
  if (kind == "cube") {
    const int n = j.at("N").get<int>();
    const auto depth = j.at("depth").get<std::size_t>();
    const SequenceRule w = io::parse_rule(j.at("weights"));
    const std::string mode = j.value("mode", std::string("exhaustive"));
    const bool exhaustive = std::pow(static_cast<double>(n), static_cast<double>(depth)) <= kExhaustiveCubeLimit;
    if (mode == "exhaustive" && !exhaustive) throw ValidationError("cube too large for exhaustive mode");
    if (mode != "exhaustive" && mode != "random") throw ValidationError("cube mode must be exhaustive or random");
    const std::uint64_t seed = exhaustive ? 0 : ctx.seed();
    return cube_sample(n, depth, w, j.value("count", std::size_t{0}), seed);
  }
  if (kind == "points") {
    std::vector<Vector> pts;
    for (const auto& p : j.at("points")) pts.push_back(io::parse_vector(p));
    return CompactSample::make(std::move(pts), j.value("resolution", 0.0), "points");
  }
  throw ValidationError("unknown sample kind \"" + kind + "\"");
}

std::vector<int> parse_n_values(const Context& ctx) {
  std::vector<int> n;
  if (ctx.config.contains("n_values")) return ctx.config.at("n_values").get<std::vector<int>>();
  const auto range = ctx.get("n_range").get<std::vector<int>>();
  if (range.size() != 2 || range[0] < 1 || range[1] < range[0]) throw ValidationError("n_range must be [lo, hi]");
  for (int i = range[0]; i <= range[1]; ++i) n.push_back(i);
  return n;
}

TaskOutput estimate_entropy_task(Context& ctx) {
  const Operator op = ctx.op();
  const SpaceSpec s = ctx.space();
  const CompactSample k = parse_sample(ctx, ctx.get("sample"));
  const auto eps = ctx.get("epsilons").get<std::vector<double>>();
  if (eps.empty()) throw ValidationError("epsilons must be nonempty");
  TableOptions topt;
  topt.threads = ctx.options.threads;
  const std::string method = ctx.value_or<std::string>("method", "greedy");
  if (method == "exact") {
    topt.method = CountMethod::exact;
  } else if (method != "greedy") {
    throw ValidationError("method must be greedy or exact");
  }
  const EntropyTable table = sn_table(op, k, parse_n_values(ctx), eps, s, topt);
  std::optional<std::pair<int, int>> window;
  if (ctx.config.contains("window")) {
    const auto w = ctx.config.at("window").get<std::vector<int>>();
    if (w.size() != 2) throw ValidationError("window must be [lo, hi]");
    window = std::make_pair(w[0], w[1]);
  }
  const EntropyEstimate est = entropy_estimate(table, window);
  TaskOutput out;
  out.result = {{"sample", {{"label", k.label}, {"size", k.size()}, {"resolution", k.resolution}}},
                {"space", io::to_json(s)},
                {"estimate", io::to_json(est)},
                {"table", "table.csv"},
                {"plot", {"plot.csv", "plot.svg"}}};
  out.files.emplace_back("table.csv", io::table_csv(table));
  out.plot = table;
  return out;
}

TaskOutput embed_shift_task(Context& ctx) {
  const SequenceRule w = io::parse_rule(ctx.get("weights"));
  const int n = ctx.get("N").get<int>();
  const auto samples = ctx.value_or<std::size_t>("samples", 1000);
  const auto m = ctx.value_or<std::size_t>("M", 64);
  const double tol = ctx.value_or<double>("tol", 0.0);
  const ConjugacyReport rep = verify_conjugacy(w, n, samples, m, tol, ctx.seed());
  TaskOutput out;
  out.result = {{"alphabet", n},
                {"samples", rep.samples},
                {"length", rep.length},
                {"max_deviation", rep.max_deviation},
                {"tol", tol},
                {"passed", rep.passed},
                {"h_top_lower_bound", std::log(static_cast<double>(n))}};
  if (ctx.config.contains("depth")) {
    const auto depth = ctx.config.at("depth").get<std::size_t>();
    const bool exhaustive = std::pow(static_cast<double>(n), static_cast<double>(depth)) <= kExhaustiveCubeLimit;
    const CompactSample k = cube_sample(n, depth, w, ctx.value_or<std::size_t>("count", 0), exhaustive ? 0 : ctx.seed());
    out.result["cube"] = {{"label", k.label}, {"size", k.size()}, {"resolution", k.resolution}};
  }
  out.certified = rep.passed;
  return out;
}

TaskOutput shadow_task(Context& ctx) {
  const SpaceSpec s = ctx.space(SpaceSpec::faggregate(SpaceSpec::lp(2.0)));
  ShadowOptions opt;
  opt.epsilon = ctx.get("epsilon").get<double>();
  opt.dim = ctx.value_or<std::size_t>("dim", 0);
  const ShadowReport rep = shadow_point(ctx.op(), io::parse_schedule(ctx.get("schedule")), s, opt);
  TaskOutput out;
  out.result = io::to_json(rep);
  out.certified = rep.certified;
  return out;
}

TaskOutput sp_lower_bound_task(Context& ctx) {
  const Operator op = ctx.op();
  const SpaceSpec s = ctx.space(SpaceSpec::faggregate(SpaceSpec::lp(2.0)));
  std::vector<Vector> anchors;
  for (const auto& a : ctx.get("anchors")) anchors.push_back(io::parse_vector(a));
  const int n = ctx.get("n").get<int>();
  const double eps = ctx.get("epsilon").get<double>();
  const int k = ctx.value_or<int>("k", 1);
  const SeparatedFamily fam = sp_separated_family(op, anchors, n, eps, k, s);
  const int m = static_cast<int>(anchors.size());
  TaskOutput out;
  out.result = {{"m", m},
                {"n", n},
                {"gap", fam.gap},
                {"k", k},
                {"steps", fam.steps},
                {"family_size", fam.family.size()},
                {"fallback_pairs", fam.fallback_pairs},
                {"certified", fam.certified}};
  if (m >= 2) out.result["lower_bound"] = sp_entropy_lower_bound(m, fam.gap, k);
  out.certified = fam.certified;
  if (ctx.value_or<bool>("table", true)) {
    const int n_prime = std::max(1, (n - 1) * (fam.gap + 1));
    const Operator tk = k == 1 ? op : Operator::power(op, k);
    TableOptions topt;
    topt.threads = ctx.options.threads;
    const EntropyTable t = sn_table(tk, fam.family, {n_prime}, {eps}, s, topt);
    const std::size_t count = t.count(n_prime, eps);
    const double target = std::pow(static_cast<double>(m), n);
    out.result["table_n"] = n_prime;
    out.result["table_count"] = count;
    out.certified = out.certified && static_cast<double>(count) >= target;
  }
  return out;
}

Json block_json(const InvariantBlock& b) {
  return {{"dim", b.dim()}, {"eigenvalues", complex_list(b.eigenvalues)}};
}

TaskOutput splitting_task(Context& ctx) {
  const Operator op = ctx.op();
  const Splitting sp = riesz_split(op, ctx.value_or<double>("circle_tol", kDefaultCircleTol));
  TaskOutput out;
  out.result = {{"unstable", block_json(sp.unstable)},
                {"center", block_json(sp.center)},
                {"stable", block_json(sp.stable)},
                {"block_residual", sp.block_residual},
                {"chain_residual", sp.chain_residual},
                {"h_top", spectral_entropy(spectrum(op))}};
  return out;
}

TaskOutput variational_gap_task(Context& ctx) {
  const GapReport g = variational_gap(ctx.op(), ctx.value_or<int>("search_periods", 12));
  TaskOutput out;
  out.result = {{"h_top", g.h_top},
                {"best_h_mu", g.best_h_mu},
                {"gap", g.gap},
                {"periods_searched", g.periods_searched},
                {"center_dim", g.center_dim},
                {"periodic_points", g.periodic_points},
                {"all_in_center", g.all_in_center},
                {"max_offending", g.max_offending},
                {"scope", g.scope}};
  out.certified = g.all_in_center;
  return out;
}

TaskOutput verify_task(Context& ctx) {
  const auto checks = run_invariant_suite(ctx.seed(), ctx.options.threads);
  TaskOutput out;
  Json list = Json::array();
  bool ok = true;
  for (const auto& c : checks) {
    list.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    ok = ok && c.passed;
  }
  out.result = {{"checks", list}, {"passed", ok}};
  out.certified = ok;
  return out;
}

const std::map<std::string, std::function<TaskOutput(Context&)>>& tasks() {
  static const std::map<std::string, std::function<TaskOutput(Context&)>> t = {
      {"spectral-entropy", spectral_entropy_task}, {"estimate-entropy", estimate_entropy_task},
      {"embed-shift", embed_shift_task},           {"shadow", shadow_task},
      {"sp-lower-bound", sp_lower_bound_task},     {"splitting", splitting_task},
      {"variational-gap", variational_gap_task},   {"verify", verify_task},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : tasks()) n.push_back(k);
    return n;
  }();
  return names;
}

RunResult run(const std::string& task, const Json& config, const RunOptions& options) {
  RunResult res;
  res.report = {{"schema_version", io::kSchemaVersion}, {"task", task}, {"config_hash", io::config_hash(config)}};
  Context ctx{config, options};
  std::optional<TaskOutput> out;
  try {
    const auto it = tasks().find(task);
    if (it == tasks().end()) throw ValidationError("unknown task \"" + task + "\"");
    if (!config.is_object()) throw ValidationError("config must be a JSON object");
    out = it->second(ctx);
    res.certified = out->certified;
    res.report["result"] = out->result;
    res.report["certified"] = out->certified;
    if (task == "verify" && !out->certified) {
      res.exit_code = kExitFailed;
      res.message = "invariant suite reported failures";
    } else if (options.require_certified && !out->certified) {
      res.exit_code = kExitUncertified;
      res.message = "result is not certified";
    }
  } catch (const ValidationError& e) {
    res.exit_code = kExitValidation;
    res.message = e.what();
  } catch (const Json::exception& e) {
    res.exit_code = kExitValidation;
    res.message = std::string("config: ") + e.what();
  } catch (const NonConvergence& e) {
    res.exit_code = kExitNonConvergence;
    res.message = e.what();
  }
  if (ctx.used_seed && (options.seed || config.contains("seed"))) {
    res.report["seed"] = options.seed ? *options.seed : config.at("seed").get<std::uint64_t>();
  }
  if (res.exit_code != kExitOk) res.report["error"] = {{"exit_code", res.exit_code}, {"message", res.message}};

  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    io::write_file(options.out_dir / "report.json", res.report.dump(2) + "\n");
    if (out) {
      for (const auto& [name, text] : out->files) io::write_file(options.out_dir / name, text);
      if (out->plot) io::emit_plot_data(*out->plot, options.out_dir / "plot");
    }
  }
  return res;
}

}  // namespace entrolab
