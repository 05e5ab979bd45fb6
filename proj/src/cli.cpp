#include "dlab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "dlab/certificates.hpp"
#include "dlab/error.hpp"
#include "dlab/koopman.hpp"
#include "dlab/nets.hpp"
#include "dlab/regular_norm.hpp"

namespace dlab {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorCode::Schema, msg); }

std::string join(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

const json& req(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) schema("field '" + where + "' must be an object");
  auto it = j.find(key);
  if (it == j.end()) schema("missing field '" + join(where, key) + "'");
  return *it;
}

template <class T>
T as(const json& v, const std::string& field) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    schema("field '" + field + "' has the wrong type (got " + std::string(v.type_name()) + ")");
  }
}

template <class T>
T req_as(const json& j, const std::string& key, const std::string& where) {
  return as<T>(req(j, key, where), join(where, key));
}

template <class T>
T opt(const json& j, const std::string& key, T def, const std::string& where) {
  if (!j.is_object()) return def;
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return def;
  return as<T>(*it, join(where, key));
}

const json& section(const json& j, const std::string& key) {
  static const json empty = json::object();
  auto it = j.find(key);
  if (it == j.end()) return empty;
  if (!it->is_object()) schema("field '" + key + "' must be an object");
  return *it;
}

Element element_from(const json& v, const std::string& field) {
  if (!v.is_array()) schema("field '" + field + "' must be an integer array");
  Element e;
  for (const auto& c : v) e.push_back(as<std::int64_t>(c, field));
  return e;
}

ElementSet set_from(const json& v, const GroupDescriptor& g, const std::string& field) {
  if (v.is_object()) {
    if (v.contains("box")) {
      const auto r = as<std::int64_t>(v["box"], field + ".box");
      if (g.kind() == GroupKind::FreeGroup) schema("field '" + field + "': box needs a grid group");
      ElementSet out;
      Element e(static_cast<std::size_t>(g.dimension()), -r);
      while (true) {
        Element c = e;
        if (g.kind() == GroupKind::TorusGrid) {
          for (auto& x : c) x = ((x % g.resolution()) + g.resolution()) % g.resolution();
        }
        out.push_back(c);
        std::size_t i = 0;
        while (i < e.size() && ++e[i] > r) e[i++] = -r;
        if (i == e.size()) break;
      }
      return make_set(std::move(out));
    }
    if (v.contains("ball")) return make_set(g.ball(as<double>(v["ball"], field + ".ball")));
    schema("field '" + field + "' must be a list, {\"box\": r} or {\"ball\": r}");
  }
  if (!v.is_array()) schema("field '" + field + "' must be a list of elements");
  ElementSet out;
  for (const auto& e : v) out.push_back(element_from(e, field));
  for (const auto& e : out) g.validate(e);
  return make_set(std::move(out));
}

std::string fmt(double x) { return format_number(x); }

std::string format_set_size(const ElementSet& s) { return std::to_string(s.size()); }

RegularNormChoice choice_from(const std::string& s) {
  if (s == "auto") return RegularNormChoice::Auto;
  if (s == "berg-christensen") return RegularNormChoice::BergChristensen;
  if (s == "fourier-abelian") return RegularNormChoice::FourierAbelian;
  if (s == "amenable-mass") return RegularNormChoice::AmenableMass;
  schema("unknown regular-norm method '" + s + "'");
}

SpectralOptions spectral_from(const json& params, std::uint64_t seed) {
  SpectralOptions o = default_discrepancy_options();
  o.tol = opt<double>(params, "spectralTol", o.tol, "params");
  o.max_iter = opt<int>(params, "maxIter", o.max_iter, "params");
  o.krylov_dim = opt<int>(params, "krylovDim", o.krylov_dim, "params");
  const auto m = opt<std::string>(params, "eigenMethod", "lanczos", "params");
  if (m == "lanczos") {
    o.method = EigenMethod::Lanczos;
  } else if (m == "power") {
    o.method = EigenMethod::PowerIteration;
  } else {
    schema("field 'params.eigenMethod' must be lanczos or power");
  }
  o.seed = seed;
  return o;
}

struct Context {
  const json& cfg;
  const json& params;
  std::uint64_t seed;
  RunOutput out;
  std::ostringstream summary;
  bool ok = true;

  void check(bool cond, const std::string& what) {
    out.record.set("check." + what, cond ? "pass" : "fail");
    summary << (cond ? "PASS " : "FAIL ") << what << "\n";
    ok = ok && cond;
  }
};

GroupDescriptor implied_group(const json& cfg) {
  if (cfg.contains("group")) return group_from_config(cfg["group"]);
  const json& act = section(cfg, "action");
  const auto kind = opt<std::string>(act, "kind", "", "action");
  if (kind == "bernoulli-window") return GroupDescriptor::integer_lattice(1);
  if (kind == "finite-permutation") {
    const auto gens = req(act, "generators", "action");
    if (!gens.is_array() || gens.empty()) schema("field 'action.generators' must be a nonempty list");
    return gens.size() == 1 ? GroupDescriptor::integer_lattice(1)
                            : GroupDescriptor::free_group(static_cast<int>(gens.size()));
  }
  schema("missing field 'group'");
}

void record_measure(Record& r, const Measure& mu) {
  r.set("group", mu.group().describe());
  r.set("measure.atoms", static_cast<unsigned long long>(mu.support_size()));
  r.set("measure.mass", mu.total_mass());
}

// ---- experiments --------------------------------------------------------

void run_regular_norm(Context& c) {
  const auto g = group_from_config(req(c.cfg, "group", ""));
  const auto mu = measure_from_config(req(c.cfg, "measure", ""), g);
  auto& r = c.out.record;
  record_measure(r, mu);
  const auto method = opt<std::string>(c.params, "method", "berg-christensen", "params");
  const int n_max = opt<int>(c.params, "nMax", 50, "params");
  NormEstimate est;
  if (method == "berg-christensen") {
    const ElementSet f = c.params.contains("F") ? set_from(c.params["F"], g, "params.F")
                                                : default_neighborhood(g);
    r.set("F.size", format_set_size(f));
    est = berg_christensen_estimate(mu, f, n_max);
    r.set("nMax", n_max);
  } else if (method == "fourier-abelian") {
    FourierOptions fo;
    fo.freq_bound = opt<double>(c.params, "freqBound", fo.freq_bound, "params");
    fo.freq_samples = opt<int>(c.params, "freqSamples", fo.freq_samples, "params");
    fo.min_frequency = opt<double>(c.params, "minFrequency", 0.0, "params");
    est = fourier_norm_abelian(mu, fo);
  } else if (method == "amenable-mass") {
    est = amenable_norm(mu);
  } else {
    schema("field 'params.method' must be berg-christensen, fourier-abelian or amenable-mass");
  }
  r.set("method", to_string(est.method));
  r.set("value", est.value);
  r.set("primary", est.value);
  r.set("extrapolated", est.extrapolated);
  if (!est.note.empty()) r.set("note", est.note);
  for (std::size_t i = 0; i < est.warnings.size(); ++i) {
    r.set("warning." + std::to_string(i), est.warnings[i]);
  }
  if (!est.sequence.empty()) {
    PlotData plot;
    for (const auto& [n, v] : est.sequence) plot.rows.emplace_back(n, v);
    c.out.plot = plot;
  }
  if (g.is_amenable()) {
    try {
      r.set("oracle.amenable", amenable_norm(mu).value);
    } catch (const Error& e) {
      r.set("oracle.amenable", std::string("unavailable: ") + e.what());
    }
  }
  c.summary << "regular-norm " << to_string(est.method) << " on " << g.describe() << "\n"
            << "  value = " << fmt(est.value) << " (total mass " << fmt(mu.total_mass()) << ")\n";
  c.check(est.value <= mu.total_mass() + 1e-10, "value<=mass");
  if (c.params.contains("expectMin")) {
    c.check(est.value >= as<double>(c.params["expectMin"], "params.expectMin"), "value>=expectMin");
  }
  if (c.params.contains("expectMax")) {
    c.check(est.value <= as<double>(c.params["expectMax"], "params.expectMax"), "value<=expectMax");
  }
}

void run_koopman_norm(Context& c) {
  const auto g = implied_group(c.cfg);
  auto& r = c.out.record;
  const auto space = action_from_config(req(c.cfg, "action", ""), g, &r);
  const auto mu = measure_from_config(req(c.cfg, "measure", ""), g);
  record_measure(r, mu);
  const auto opts = spectral_from(c.params, c.seed);
  const auto res = discrepancy_result(space, mu, opts);
  r.set("delta", res.value);
  r.set("primary", res.value);
  r.set("delta.residual", res.residual);
  r.set("delta.applications", res.applications);
  c.summary << "koopman-norm on " << space.describe() << "\n"
            << "  delta = " << fmt(res.value) << " (residual " << fmt(res.residual) << ", "
            << res.applications << " applications)\n";
  c.check(res.value <= mu.total_mass() + 1e-6, "delta<=mass");
  if (space.grid_dimension() > 0 && opt<bool>(c.params, "character", true, "params")) {
    const std::int64_t cutoff = opt<std::int64_t>(c.params, "cutoff", space.side() / 2, "params");
    const auto ch = character_norm(space, mu, cutoff);
    r.set("character.value", ch.value);
    r.set("character.cutoff", static_cast<long long>(cutoff));
    r.set("character.count", static_cast<unsigned long long>(ch.characters));
    std::string arg;
    for (auto m : ch.argmax) arg += (arg.empty() ? "" : " ") + std::to_string(m);
    r.set("character.argmax", arg);
    c.summary << "  character norm = " << fmt(ch.value) << " over " << ch.characters
              << " characters\n";
    if (cutoff >= space.side() / 2) {
      c.check(std::abs(ch.value - res.value) <= 1e-6, "delta==character");
    }
  }
}

void run_verify_bound(Context& c) {
  const auto g = implied_group(c.cfg);
  auto& r = c.out.record;
  const auto space = action_from_config(req(c.cfg, "action", ""), g, &r);
  const auto mu = measure_from_config(req(c.cfg, "measure", ""), g);
  record_measure(r, mu);
  BoundOptions bo;
  bo.tol = opt<double>(c.params, "tol", 1e-3, "params");
  bo.method = choice_from(opt<std::string>(c.params, "method", "auto", "params"));
  bo.n_max = opt<int>(c.params, "nMax", bo.n_max, "params");
  bo.atom_threshold = opt<double>(c.params, "atomThreshold", bo.atom_threshold, "params");
  bo.spectral = spectral_from(c.params, c.seed);
  const auto rep = verify_lower_bound(space, mu, bo);
  r.set("delta", rep.delta);
  r.set("primary", rep.delta);
  r.set("lambda", rep.lambda);
  r.set("lambda.method", to_string(rep.lambda_estimate.method));
  r.set("tol", bo.tol);
  r.set("inequality_holds", rep.inequality_holds);
  r.set("hypotheses_ok", rep.hypotheses_ok);
  r.set("asserted", rep.asserted);
  for (std::size_t i = 0; i < rep.warnings.size(); ++i) {
    r.set("warning." + std::to_string(i), rep.warnings[i]);
  }
  c.summary << "verify-bound on " << rep.space << "\n"
            << "  delta = " << fmt(rep.delta) << ", lambda = " << fmt(rep.lambda) << " ("
            << to_string(rep.lambda_estimate.method) << "), tol = " << fmt(bo.tol) << "\n";
  for (const auto& w : rep.warnings) c.summary << "  warning: " << w << "\n";
  c.check(rep.pass, "delta>=lambda-tol");
}

void run_certificate(Context& c) {
  const auto g = implied_group(c.cfg);
  auto& r = c.out.record;
  const auto space = action_from_config(req(c.cfg, "action", ""), g, &r);
  const auto mu = measure_from_config(req(c.cfg, "measure", ""), g);
  record_measure(r, mu);
  const auto x0 = opt<std::size_t>(c.params, "x0", 0, "params");
  const int n_max = opt<int>(c.params, "nMax", 20, "params");
  const double slack = opt<double>(c.params, "slack", 0.02, "params");
  const double tol = opt<double>(c.params, "tol", 1e-8, "params");
  const auto run = certify(space, mu, x0, n_max, slack);
  const auto& rep = run.report;
  PlotData plot;
  plot.y_label = "ratio_root";
  for (const auto& row : rep.rows) {
    const std::string p = "n." + std::to_string(row.n) + ".";
    r.set(p + "nu_B", row.nu_b);
    r.set(p + "nu_SnB", row.nu_snb);
    r.set(p + "ratio", row.ratio);
    r.set(p + "ratio_root", row.ratio_root);
    if (row.rayleigh) r.set(p + "rayleigh", *row.rayleigh);
    if (row.chain) r.set(p + "chain", *row.chain);
    plot.rows.emplace_back(row.n, row.ratio_root);
  }
  c.out.plot = plot;
  r.set("cond1", rep.cond1);
  r.set("cond2", rep.cond2);
  r.set("cond3", rep.cond3);
  r.set("max_ratio_root", rep.max_ratio_root);
  const double bound = rep.norm_lower_bound.value_or(0.0);
  r.set("bound", bound);
  r.set("primary", bound);
  c.summary << "certificate on " << space.describe() << " (nMax " << n_max << ")\n"
            << "  conditions: (1) " << rep.cond1 << " (2) " << rep.cond2 << " (3) " << rep.cond3
            << ", max ratio^(1/n) = " << fmt(rep.max_ratio_root) << "\n"
            << "  norm lower bound = " << fmt(bound) << "\n";
  c.check(rep.cond1, "condition1");
  c.check(rep.cond2, "condition2");
  c.check(rep.cond3, "condition3");
  if (opt<bool>(c.params, "crossCheck", true, "params")) {
    auto so = spectral_from(c.params, c.seed);
    so.tol = tol;
    const double delta = discrepancy_result(space, mu, so).value;
    r.set("delta", delta);
    c.summary << "  discrepancy = " << fmt(delta) << "\n";
    c.check(bound <= delta + 2 * tol, "bound<=delta+2tol");
  }
  if (c.params.contains("minBound")) {
    c.check(bound >= as<double>(c.params["minBound"], "params.minBound"), "bound>=minBound");
  }
}

void run_nets(Context& c) {
  const auto g = group_from_config(req(c.cfg, "group", ""));
  auto& r = c.out.record;
  r.set("group", g.describe());
  const json& nets = section(c.cfg, "nets");
  const auto a = set_from(req(nets, "A", "nets"), g, "nets.A");
  const auto b = set_from(req(nets, "B", "nets"), g, "nets.B");
  const int n = opt<int>(nets, "n", 1, "nets");
  const auto bpow = set_power(g, b, n);
  const auto inst = greedy_maximal_net(g, bpow, a);
  const auto nb = verify_net_bounds(inst);
  r.set("n", n);
  r.set("net.size", static_cast<unsigned long long>(nb.net_size));
  r.set("primary", static_cast<unsigned long long>(nb.net_size));
  r.set("packing.lhs", nb.packing_lhs);
  r.set("packing.rhs", nb.packing_rhs);
  r.set("covering.lhs", nb.covering_lhs);
  r.set("covering.rhs", nb.covering_rhs);
  r.set("separated", nb.separated);
  r.set("maximal", nb.maximal);
  c.summary << "nets on " << g.describe() << ": |N| = " << nb.net_size << " for B^" << n << "\n"
            << "  |N| mu(A) = " << fmt(nb.packing_lhs) << " <= mu(B^n A) = " << fmt(nb.packing_rhs)
            << "\n  mu(B^n) = " << fmt(nb.covering_lhs) << " <= |N| mu(AA^-1) = "
            << fmt(nb.covering_rhs) << "\n";
  c.check(nb.ok(), "net-bounds");
  if (nets.contains("ratio")) {
    const json& rs = nets["ratio"];
    const auto a1 = set_from(req(rs, "A1", "nets.ratio"), g, "nets.ratio.A1");
    const auto a2 = set_from(req(rs, "A2", "nets.ratio"), g, "nets.ratio.A2");
    const auto range = req_as<std::vector<int>>(rs, "nRange", "nets.ratio");
    if (range.size() != 2) schema("field 'nets.ratio.nRange' must be [lo, hi]");
    const auto study = net_ratio_study(g, a1, a2, b, range[0], range[1]);
    PlotData plot;
    plot.y_label = "ratio";
    for (const auto& row : study.rows) {
      r.set("ratio.n." + std::to_string(row.n), row.ratio);
      plot.rows.emplace_back(row.n, row.ratio);
    }
    c.out.plot = plot;
    r.set("ratio.min", study.min_ratio);
    r.set("ratio.max", study.max_ratio);
    r.set("ratio.c1", study.c1);
    r.set("ratio.c2", study.c2);
    c.summary << "  |N2|/|N1| in [" << fmt(study.min_ratio) << ", " << fmt(study.max_ratio)
              << "], predicted interval [" << fmt(study.c1) << ", " << fmt(study.c2) << "]\n";
    c.check(study.contained, "ratio-in-[c1,c2]");
  }
  if (nets.contains("cover")) {
    const int k = req_as<int>(nets["cover"], "k", "nets.cover");
    const auto w = covering_witness(g, a, b, k);
    r.set("cover.k", k);
    r.set("cover.size", static_cast<unsigned long long>(w.s.size()));
    bool all = w.contains;
    for (std::size_t i = 0; i < w.power_contains.size(); ++i) {
      all = all && w.power_contains[i];
      r.set("cover.growth." + std::to_string(i + 1), w.growth[i]);
    }
    c.summary << "  covering witness |S| = " << w.s.size() << " for k = " << k << "\n";
    c.check(all, "covering");
  }
}

void run_margulis(Context& c) {
  const auto n = opt<std::int64_t>(c.params, "N", 1024, "params");
  const double tol = opt<double>(c.params, "tol", 1e-8, "params");
  const auto g = GroupDescriptor::real_grid(1, n);
  const auto space = ActionSpace::circle_rotation(g, n);
  const auto mu = Measure::uniform_interval(g, 0.0, 1.0, true);
  auto& r = c.out.record;
  r.set("action", space.describe());
  record_measure(r, mu);
  const auto ch = character_norm(space, mu, n / 2);
  auto so = spectral_from(c.params, c.seed);
  so.tol = tol;
  BoundOptions bo;
  bo.spectral = so;
  bo.method = RegularNormChoice::AmenableMass;
  const auto rep = verify_lower_bound(space, mu, bo);
  r.set("character.max", ch.value);
  r.set("delta", rep.delta);
  r.set("primary", rep.delta);
  r.set("lambda", rep.lambda);
  r.set("asserted", rep.asserted);
  const bool covers = std::any_of(rep.warnings.begin(), rep.warnings.end(), [](const auto& w) {
    return w.find("orbit") != std::string::npos;
  });
  c.summary << "margulis-demo on " << space.describe() << "\n"
            << "  max nonzero character eigenvalue = " << fmt(ch.value) << "\n"
            << "  delta = " << fmt(rep.delta) << ", lambda = " << fmt(rep.lambda) << "\n";
  if (!rep.asserted) {
    c.summary << "  inequality not asserted (hypothesis violation: "
              << (covers ? "orbit covers the space" : "fixed cells") << ")\n";
  }
  c.check(ch.value <= 1e-10, "characters<=1e-10");
  c.check(rep.delta <= 1e-8, "delta<=1e-8");
  c.check(rep.lambda == 1.0, "lambda==1");
  c.check(!rep.asserted && covers, "hypothesis-violation-reported");
}

void set_path(json& j, const std::string& dotted, const json& value) {
  json* cur = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot - start);
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    start = dot + 1;
  }
}

RunOutput run_sweep(const json& cfg, int jobs) {
  RunOutput out;
  const json& tmpl = req(cfg, "template", "");
  if (!tmpl.is_object()) schema("field 'template' must be an object");
  if (tmpl.value("experiment", "") == "sweep") schema("sweeps cannot nest");
  const json grid = cfg.contains("grid") ? cfg["grid"] : json::object();
  if (!grid.is_object()) schema("field 'grid' must be an object of value lists");

  std::vector<std::string> keys;
  std::vector<std::vector<json>> values;
  bool empty = grid.empty();
  for (auto it = grid.begin(); it != grid.end(); ++it) {
    if (!it->is_array()) schema("field 'grid." + it.key() + "' must be a list");
    keys.push_back(it.key());
    values.emplace_back(it->begin(), it->end());
    empty = empty || it->empty();
  }
  std::vector<json> children;
  std::vector<std::vector<json>> assignments;
  if (!empty) {
    std::vector<std::size_t> idx(keys.size(), 0);
    while (true) {
      json child = tmpl;
      if (cfg.contains("seed") && !child.contains("seed")) child["seed"] = cfg["seed"];
      std::vector<json> assign;
      for (std::size_t k = 0; k < keys.size(); ++k) {
        set_path(child, keys[k], values[k][idx[k]]);
        assign.push_back(values[k][idx[k]]);
      }
      children.push_back(std::move(child));
      assignments.push_back(std::move(assign));
      std::size_t k = keys.size();
      while (k > 0 && ++idx[k - 1] == values[k - 1].size()) idx[--k] = 0;
      if (k == 0) break;
    }
  }

  std::vector<RunOutput> results(children.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t lo = 0; lo < children.size(); lo += width) {
    std::vector<std::future<RunOutput>> batch;
    for (std::size_t i = lo; i < std::min(children.size(), lo + width); ++i) {
      batch.push_back(std::async(std::launch::async, [&children, i] {
        return run_experiment(children[i], 1);
      }));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) results[lo + i] = batch[i].get();
  }

  auto& r = out.record;
  r.set("experiment", "sweep");
  r.set("template", tmpl.value("experiment", ""));
  r.set("rows", static_cast<unsigned long long>(results.size()));
  std::ostringstream s;
  s << "sweep of " << tmpl.value("experiment", "?") << " over " << results.size()
    << " instance(s)\n";
  PlotData plot;
  plot.x_label = "row";
  plot.y_label = "primary";
  bool all = true;
  std::vector<double> primaries;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const std::string p = "row." + std::to_string(i) + ".";
    std::string desc;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      r.set(p + keys[k], assignments[i][k].dump());
      desc += (desc.empty() ? "" : ", ") + keys[k] + "=" + assignments[i][k].dump();
    }
    r.set(p + "exit", results[i].exit_code);
    const std::string* prim = results[i].record.find("primary");
    r.set(p + "primary", prim ? *prim : std::string("nan"));
    if (prim) {
      const double v = std::strtod(prim->c_str(), nullptr);
      primaries.push_back(v);
      plot.rows.emplace_back(static_cast<double>(i), v);
    }
    all = all && results[i].exit_code == kExitPass;
    s << "  [" << i << "] " << desc << " -> exit " << results[i].exit_code << ", primary "
      << (prim ? *prim : "nan") << "\n";
  }
  std::string trend = "n/a";
  if (primaries.size() >= 2) {
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < primaries.size(); ++i) {
      inc = inc && primaries[i] >= primaries[i - 1];
      dec = dec && primaries[i] <= primaries[i - 1];
    }
    trend = inc && dec ? "constant" : inc ? "nondecreasing" : dec ? "nonincreasing" : "mixed";
  }
  r.set("trend", trend);
  r.set("status", all ? "pass" : "fail");
  s << "  trend (not asserted): " << trend << "\n";
  out.summary = s.str();
  out.plot = plot;
  out.exit_code = all ? kExitPass : kExitAssertion;
  return out;
}

}  // namespace

json parse_config(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    schema(std::string("config is not valid JSON: ") + e.what());
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Schema, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

GroupDescriptor group_from_config(const json& j) {
  const auto kind = req_as<std::string>(j, "kind", "group");
  if (kind == "integer-lattice") return GroupDescriptor::integer_lattice(opt<int>(j, "dim", 1, "group"));
  if (kind == "free-group") return GroupDescriptor::free_group(req_as<int>(j, "rank", "group"));
  if (kind == "real-grid") {
    return GroupDescriptor::real_grid(opt<int>(j, "dim", 1, "group"),
                                      req_as<std::int64_t>(j, "resolution", "group"));
  }
  if (kind == "torus-grid") {
    return GroupDescriptor::torus_grid(opt<int>(j, "dim", 1, "group"),
                                       req_as<std::int64_t>(j, "resolution", "group"));
  }
  schema("unknown group kind '" + kind + "'");
}

Measure measure_from_config(const json& j, const GroupDescriptor& g) {
  const auto type = req_as<std::string>(j, "type", "measure");
  const double mass = opt<double>(j, "mass", 1.0, "measure");
  if (type == "atoms") {
    const json& atoms = req(j, "atoms", "measure");
    if (!atoms.is_array()) schema("field 'measure.atoms' must be a list");
    std::vector<Measure::Atom> out;
    for (const auto& a : atoms) {
      out.emplace_back(element_from(req(a, "at", "measure.atoms[]"), "measure.atoms[].at"),
                       req_as<double>(a, "mass", "measure.atoms[]"));
    }
    return Measure::from_atoms(g, std::move(out));
  }
  if (type == "uniform") {
    return Measure::uniform(g, set_from(req(j, "support", "measure"), g, "measure.support"), mass);
  }
  if (type == "generators") {
    auto gens = g.standard_generators();
    for (const auto& e : g.standard_generators()) gens.push_back(g.inverse(e));
    return Measure::uniform(g, make_set(std::move(gens)), mass);
  }
  if (type == "dirac") return Measure::dirac(g, element_from(req(j, "at", "measure"), "measure.at"), mass);
  if (type == "uniform-interval") {
    const auto mu = Measure::uniform_interval(g, req_as<double>(j, "lo", "measure"),
                                              req_as<double>(j, "hi", "measure"),
                                              opt<bool>(j, "halfOpen", false, "measure"));
    return scale(mu, mass);
  }
  schema("unknown measure type '" + type + "'");
}

ActionSpace action_from_config(const json& j, const GroupDescriptor& g, Record* record) {
  const auto kind = req_as<std::string>(j, "kind", "action");
  auto note = [&](const std::string& k, const std::string& v) {
    if (record) record->set(k, v);
  };
  if (kind == "circle-rotation") {
    const auto n = req_as<std::int64_t>(j, "N", "action");
    auto s = ActionSpace::circle_rotation(g, n, opt<std::int64_t>(j, "step", 1, "action"));
    note("action", s.describe());
    return s;
  }
  if (kind == "torus-translation") {
    const auto n = req_as<std::int64_t>(j, "N", "action");
    if (j.contains("p") || j.contains("r")) {
      auto s = ActionSpace::torus_translation(g, n, req_as<std::int64_t>(j, "p", "action"),
                                              req_as<std::int64_t>(j, "r", "action"));
      note("action", s.describe());
      return s;
    }
    const double alpha = opt<double>(j, "alpha", std::sqrt(2.0), "action");
    const std::int64_t q = g.kind() == GroupKind::RealGrid ? g.resolution() : 1;
    const auto fc = choose_flow(alpha, n, q);
    auto s = ActionSpace::torus_translation(g, fc.cells, fc.p, fc.r);
    note("action", s.describe());
    note("flow.alpha", format_number(alpha));
    note("flow.convergent", std::to_string(fc.p) + "/" + std::to_string(fc.r));
    note("flow.N.requested", std::to_string(n));
    note("flow.N", std::to_string(fc.cells));
    return s;
  }
  if (kind == "bernoulli-window") {
    auto s = ActionSpace::bernoulli_window(req_as<int>(j, "radius", "action"),
                                           opt<int>(j, "alphabet", 2, "action"));
    note("action", s.describe());
    return s;
  }
  if (kind == "finite-permutation") {
    auto s = ActionSpace::finite_permutation(
        req_as<std::vector<std::vector<std::int64_t>>>(j, "generators", "action"));
    note("action", s.describe());
    return s;
  }
  schema("unknown action kind '" + kind + "'");
}

RunOutput run_experiment(const json& config, int jobs) {
  try {
    if (!config.is_object()) schema("config must be a JSON object");
    const auto experiment = req_as<std::string>(config, "experiment", "");
    if (experiment == "sweep") return run_sweep(config, jobs);
    Context c{config, section(config, "params"), opt<std::uint64_t>(config, "seed", 0, ""), {}, {},
              true};
    c.out.record.set("experiment", experiment);
    if (experiment == "regular-norm") {
      run_regular_norm(c);
    } else if (experiment == "koopman-norm") {
      run_koopman_norm(c);
    } else if (experiment == "verify-bound") {
      run_verify_bound(c);
    } else if (experiment == "certificate") {
      run_certificate(c);
    } else if (experiment == "nets") {
      run_nets(c);
    } else if (experiment == "margulis-demo") {
      run_margulis(c);
    } else {
      schema("unknown experiment '" + experiment + "'");
    }
    c.out.record.set("status", c.ok ? "pass" : "fail");
    c.out.exit_code = c.ok ? kExitPass : kExitAssertion;
    c.out.summary = c.summary.str();
    return std::move(c.out);
  } catch (const Error& e) {
    RunOutput out;
    out.exit_code = e.code() == ErrorCode::Schema ? kExitSchema : kExitRuntime;
    out.summary = std::string(to_string(e.code())) + " error: " + e.what() + "\n";
    out.record.set("status", "error");
    out.record.set("error.kind", to_string(e.code()));
    out.record.set("error.message", e.what());
    return out;
  } catch (const std::exception& e) {
    RunOutput out;
    out.exit_code = kExitRuntime;
    out.summary = std::string("error: ") + e.what() + "\n";
    out.record.set("status", "error");
    out.record.set("error.message", e.what());
    return out;
  }
}

void write_outputs(const RunOutput& out, const std::string& dir, const std::string& format) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::Resource, "cannot write " + (fs::path(dir) / name).string());
    f << body;
  };
  write("summary.txt", out.summary);
  if (format == "kv") {
    write("record.kv", out.record.to_kv());
  } else {
    write("record.csv", out.record.to_csv());
  }
  if (out.plot) write("plot.csv", out.plot->to_csv());
}

int run_cli(int argc, char** argv) {
  CLI::App app{"dlab: discrepancy and regular-representation norm experiments"};
  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  std::int64_t seed = -1;
  std::string format = "csv";
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "parallel sweep children")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "override the config seed")->check(CLI::NonNegativeNumber);
  app.add_option("--format", format, "machine record format")->check(CLI::IsMember({"csv", "kv"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }

  json config;
  try {
    config = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  }
  if (seed >= 0 && config.is_object()) {
    config["seed"] = seed;
    if (config.contains("template") && config["template"].is_object()) {
      config["template"]["seed"] = seed;
    }
  }
  const RunOutput out = run_experiment(config, jobs);

  if (out_dir.empty()) {
    if (const char* env = std::getenv("DLAB_OUT_DIR"); env && *env) {
      out_dir = env;
    } else if (config.is_object() && config.contains("output") && config["output"].is_object() &&
               config["output"].contains("dir") && config["output"]["dir"].is_string()) {
      out_dir = config["output"]["dir"].get<std::string>();
    } else {
      out_dir = "dlab-out";
    }
  }
  std::cout << out.summary;
  try {
    write_outputs(out, out_dir, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return out.exit_code;
}

}  // namespace dlab
