#include "qsb/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsb/canonical_map.hpp"
#include "qsb/certification.hpp"
#include "qsb/config.hpp"
#include "qsb/errors.hpp"
#include "qsb/lie_geometry.hpp"
#include "qsb/parallel.hpp"
#include "qsb/qs_group.hpp"
#include "qsb/quasimetrics.hpp"
#include "qsb/serialization.hpp"
#include "qsb/variation.hpp"

namespace qsb::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Records are flat JSON objects. CSV output repeats the header whenever the
// column set changes (per-sample rows followed by a summary row, say).
class Reporter {
 public:
  Reporter(std::ostream& os, OutputFormat fmt) : os_(os), fmt_(fmt) {}

  void emit(const Json& rec) {
    if (fmt_ == OutputFormat::Jsonl) {
      os_ << rec.dump() << '\n';
      return;
    }
    std::vector<std::string> keys;
    for (const auto& [k, v] : rec.items()) keys.push_back(k);
    if (keys != header_) {
      header_ = keys;
      write_row(keys);
    }
    std::vector<std::string> cells;
    for (const auto& [k, v] : rec.items()) cells.push_back(cell(v));
    write_row(cells);
  }

 private:
  static std::string cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      const auto& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        os_ << '"';
        for (char ch : c) os_ << (ch == '"' ? "\"\"" : std::string(1, ch));
        os_ << '"';
      } else {
        os_ << c;
      }
    }
    os_ << '\n';
  }

  std::ostream& os_;
  OutputFormat fmt_;
  std::vector<std::string> header_;
};

// JSON has no infinities; keep them readable as strings.
Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

struct Flags {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
  unsigned threads = 1;
  bool records = false;
  std::string kind = "D";
  std::string distribution = "mixture";
  std::string p, q, point;
  std::string rect = "0,1,0,1";
  std::string t_list = "-4,-5,-6,-7,-8,-9,-10,-11,-12,-13,-14";
  std::string radii;
  std::string map, map2, g, h, builtin;
  std::size_t planes = 100000;
  std::size_t points = 16;
  double tolerance_conf = 0.02;
};

// Values of flags the user set explicitly override the config file.
struct Context {
  Flags flags;
  RunConfig cfg;
  RootOptions roots;
  Reporter* rep = nullptr;
  std::ostream* os = nullptr;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_double(item));
    } catch (const NumericalError&) {
      throw UsageError(std::string("bad number in ") + what + ": '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(what) + " is empty");
  return out;
}

BoundaryPoint require_point(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  try {
    return parse_point(text);
  } catch (const NumericalError& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

QuasimetricKind require_kind(const std::string& text) {
  const auto k = parse_kind(text);
  if (!k) throw UsageError("--kind must be D, Ds or De");
  return *k;
}

Rect require_rect(const std::string& text) {
  const auto v = parse_list(text, "--rect");
  if (v.size() != 4) throw UsageError("--rect needs a,b,c,d");
  Rect r{v[0], v[1], v[2], v[3]};
  if (!(r.b > r.a) || !(r.d > r.c)) throw UsageError("--rect must satisfy a < b and c < d");
  return r;
}

std::optional<CanonicalQSMap> builtin_map(const std::string& name) {
  if (name == "identity") return identity_map();
  if (name == "flip") return make_flip();
  if (name.rfind("lambda:", 0) == 0) return make_lambda(parse_list(name.substr(7), "lambda")[0]);
  if (name.rfind("translation:", 0) == 0) {
    const auto v = parse_list(name.substr(12), "translation");
    if (v.size() != 2) throw UsageError("translation:<u>,<v>");
    return make_translation(v[0], v[1]);
  }
  return std::nullopt;
}

CanonicalQSMap load_map(const Context& ctx, const std::string& path) {
  if (path.empty()) {
    if (!ctx.flags.builtin.empty()) {
      if (auto m = builtin_map(ctx.flags.builtin)) return *m;
      throw UsageError("--builtin '" + ctx.flags.builtin + "' is not a canonical map");
    }
    throw UsageError("--map (or --builtin) is required");
  }
  return read_map(read_file(path));
}

QSGroupElement load_element(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  return read_group_element(read_file(path));
}

// Canonical maps from --map / --builtin, plus the non-canonical swap.
struct Candidate {
  BlackBoxMap map;
  std::optional<CanonicalQSMap> canonical;
};

Candidate load_black_box(const Context& ctx) {
  if (ctx.flags.map.empty() && ctx.flags.builtin == "swap") return {coordinate_swap(), std::nullopt};
  auto f = load_map(ctx, ctx.flags.map);
  const std::string label = ctx.flags.map.empty() ? ctx.flags.builtin : ctx.flags.map;
  return {black_box(f, label), f};
}

SamplerConfig sampler(const Context& ctx) {
  const auto d = parse_distribution(ctx.flags.distribution);
  if (!d) throw UsageError("--distribution must be mixture, uniform, logscale, degenerate or horizontal");
  SamplerConfig s;
  s.distribution = *d;
  s.count = ctx.cfg.samples;
  s.seed = ctx.cfg.seed;
  return s;
}

Json pair_fields(const PointPair& pr) {
  return Json{{"px", pr.p.x}, {"py", pr.p.y}, {"qx", pr.q.x}, {"qy", pr.q.y}};
}

// ---------------------------------------------------------------------------

int cmd_dist(Context& ctx) {
  const auto kind = require_kind(ctx.flags.kind);
  const auto p = require_point(ctx.flags.p, "--p");
  const auto q = require_point(ctx.flags.q, "--q");
  const double d = dist(kind, p, q, ctx.roots);
  if (ctx.cfg.output_format == OutputFormat::Csv && !ctx.flags.records) {
    *ctx.os << format_double(d) << '\n';
  } else {
    Json rec{{"kind", std::string(to_string(kind))}};
    rec.update(pair_fields({p, q}));
    rec["dist"] = d;
    ctx.rep->emit(rec);
  }
  return kExitOk;
}

int cmd_check_sandwich(Context& ctx) {
  const auto s = sampler(ctx);
  const std::size_t n = ctx.cfg.samples;
  std::vector<SandwichComparison> res(n);
  parallel_for(n, ctx.cfg.threads, [&](std::size_t i) {
    const auto pr = sample_pair(s, i);
    res[i] = comparison_DsD_check(pr.p, pr.q, ctx.cfg.tolerance_check, ctx.roots);
  });
  std::size_t violations = 0, counted = 0;
  double max_ds_d = 0.0, max_d_ds = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = res[i];
    if (r.d > 0.0) {
      ++counted;
      max_ds_d = std::max(max_ds_d, r.ds / r.d);
      max_d_ds = std::max(max_d_ds, r.d / r.ds);
    }
    if (!r.holds) ++violations;
    if (ctx.flags.records || !r.holds) {
      Json rec{{"record", "pair"}, {"kind", "Ds"}};
      rec.update(pair_fields(sample_pair(s, i)));
      rec["dist"] = r.ds;
      rec["lower_bound"] = r.d / 3.0;
      rec["upper_bound"] = 3.0 * r.d;
      rec["pass"] = r.holds;
      ctx.rep->emit(rec);
    }
  }
  const bool pass = violations == 0;
  ctx.rep->emit(Json{{"record", "summary"},
                     {"check", "sandwich"},
                     {"samples", counted},
                     {"violations", violations},
                     {"max_Ds_over_D", max_ds_d},
                     {"max_D_over_Ds", max_d_ds},
                     {"bound", 3.0},
                     {"pass", pass}});
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_check_norms(Context& ctx) {
  const auto s = sampler(ctx);
  const std::size_t n = ctx.cfg.samples;
  std::vector<NormComparison> res(n);
  parallel_for(n, ctx.cfg.threads, [&](std::size_t i) {
    const auto pr = sample_pair(s, i);
    res[i] = norm_comparison_check(pr.p, pr.q, ctx.cfg.tolerance_check, ctx.roots);
  });
  std::size_t violations = 0, counted = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = res[i];
    if (r.ds > 0.0) {
      ++counted;
      lo = std::min(lo, r.de / r.ds);
      hi = std::max(hi, r.de / r.ds);
    }
    if (!r.holds) ++violations;
    if (ctx.flags.records || !r.holds) {
      Json rec{{"record", "pair"}, {"kind", "De"}};
      rec.update(pair_fields(sample_pair(s, i)));
      rec["dist"] = r.de;
      rec["lower_bound"] = r.ds;
      rec["upper_bound"] = r.upper;
      rec["pass"] = r.holds;
      ctx.rep->emit(rec);
    }
  }
  const bool pass = violations == 0;
  ctx.rep->emit(Json{{"record", "summary"},
                     {"check", "norms"},
                     {"samples", counted},
                     {"violations", violations},
                     {"min_De_over_Ds", num(lo)},
                     {"max_De_over_Ds", hi},
                     {"bound", norm_comparison_constant()},
                     {"pass", pass}});
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_check_axioms(Context& ctx) {
  const auto kind = require_kind(ctx.flags.kind);
  const auto s = sampler(ctx);
  const std::size_t n = ctx.cfg.samples;
  const double tol = ctx.cfg.tolerance_check;
  struct Row {
    double symmetry = 0.0, translation = 0.0, horizontal = 0.0, agreement = 0.0;
    bool positive = true;
  };
  std::vector<Row> rows(n);
  parallel_for(n, ctx.cfg.threads, [&](std::size_t i) {
    const auto pr = sample_pair(s, i);
    auto rng = sample_rng(derive_seed(ctx.cfg.seed, 0xa5a5), i);
    const BoundaryPoint v{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    const double d = dist(kind, pr.p, pr.q, ctx.roots);
    const double scale = std::max({d, std::abs(pr.p.x) + std::abs(pr.p.y) + std::abs(pr.q.x) +
                                          std::abs(pr.q.y) + 2.0 * (std::abs(v.x) + std::abs(v.y))});
    Row r;
    r.symmetry = std::abs(d - dist(kind, pr.q, pr.p, ctx.roots)) / std::max(d, 1e-300);
    r.translation = std::abs(d - dist(kind, pr.p + v, pr.q + v, ctx.roots)) / scale;
    r.positive = (pr.p == pr.q) ? d == 0.0 : d > 0.0;
    if (dist(kind, pr.p, pr.p, ctx.roots) != 0.0) r.positive = false;
    if (kind == QuasimetricKind::ClosedFormD) {
      const BoundaryPoint a{pr.p.x, pr.p.y}, b{pr.q.x, pr.p.y};
      const double h = std::abs(a.x - b.x);
      r.horizontal = std::abs(dist_D(a, b) - h) / std::max(h, 1e-300);
    }
    if (kind == QuasimetricKind::SuperNormDs && d > 0.0) {
      r.agreement = std::abs(d - dist_Ds_bisection(pr.p, pr.q, ctx.roots)) / d;
    }
    rows[i] = r;
  });
  Row worst;
  std::size_t non_positive = 0;
  for (const auto& r : rows) {
    worst.symmetry = std::max(worst.symmetry, r.symmetry);
    worst.translation = std::max(worst.translation, r.translation);
    worst.horizontal = std::max(worst.horizontal, r.horizontal);
    worst.agreement = std::max(worst.agreement, r.agreement);
    if (!r.positive) ++non_positive;
  }
  std::vector<PointTriple> triples(std::min<std::size_t>(n, 100000));
  for (std::size_t i = 0; i < triples.size(); ++i) triples[i] = sample_triple(s, i);
  const auto prof = profile_quasimetric(kind, triples, ctx.roots, ctx.cfg.threads);
  // root-solved distances carry e^{tol} relative error
  const double agree_tol = kind == QuasimetricKind::ClosedFormD ? 0.0 : 10.0 * ctx.cfg.tolerance_root;
  const bool pass = worst.symmetry <= agree_tol + tol && worst.translation <= tol &&
                    worst.horizontal <= tol && worst.agreement <= 10.0 * tol && non_positive == 0;
  ctx.rep->emit(Json{{"record", "summary"},
                     {"check", "axioms"},
                     {"kind", std::string(to_string(kind))},
                     {"samples", n},
                     {"max_symmetry_error", worst.symmetry},
                     {"max_translation_error", worst.translation},
                     {"max_horizontal_error", worst.horizontal},
                     {"max_Ds_route_disagreement", worst.agreement},
                     {"positivity_failures", non_positive},
                     {"quasi_triangle_constant", prof.quasi_triangle_constant},
                     {"snowflake_epsilon", prof.snowflake_epsilon},
                     {"triples", prof.sample_count},
                     {"pass", pass}});
  return pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

int cmd_map(Context& ctx, const std::string& action) {
  const auto f = load_map(ctx, ctx.flags.map);
  if (action == "apply") {
    const auto p = require_point(ctx.flags.p, "--p");
    const auto r = apply(f, p);
    ctx.rep->emit(Json{{"x", r.x}, {"y", r.y}});
  } else if (action == "compose") {
    if (ctx.flags.map2.empty()) throw UsageError("--map2 is required");
    *ctx.os << write_map(compose(f, read_map(read_file(ctx.flags.map2))));
  } else if (action == "invert") {
    *ctx.os << write_map(invert(f));
  } else if (action == "classify") {
    const auto c = classify(f);
    ctx.rep->emit(Json{{"class", std::string(to_string(c.kind))}, {"factor", c.factor}});
  } else {
    ctx.rep->emit(Json{{"bound", lipschitz_bound(f)}, {"inverse_bound", lipschitz_bound(invert(f))}});
  }
  return kExitOk;
}

int cmd_group(Context& ctx, const std::string& action) {
  if (action == "mul") {
    *ctx.os << write_group_element(
        group_mul(load_element(ctx.flags.g, "--g"), load_element(ctx.flags.h, "--g2")));
  } else if (action == "inv") {
    *ctx.os << write_group_element(group_inv(load_element(ctx.flags.g, "--g")));
  } else if (action == "realize") {
    *ctx.os << write_map(realize(load_element(ctx.flags.g, "--g")));
  } else {
    *ctx.os << write_group_element(factorize(load_map(ctx, ctx.flags.map)));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_certify_eta(Context& ctx) {
  const auto kind = require_kind(ctx.flags.kind);
  const auto cand = load_black_box(ctx);
  EtaConfig ec;
  ec.samples = ctx.cfg.samples;
  ec.seed = ctx.cfg.seed;
  ec.threads = ctx.cfg.threads;
  const auto est = eta_modulus_estimate(cand.map, kind, ec);
  for (const auto& p : est.points) {
    ctx.rep->emit(Json{{"record", "ratio"}, {"ratio", p.ratio}, {"eta", p.eta}, {"count", p.count}});
  }
  Json summary{{"record", "summary"},
               {"map", cand.map.label},
               {"kind", std::string(to_string(kind))},
               {"eta_at_one", num(est.eta_at_one)},
               {"eta_at_one_doubled", num(est.eta_at_one_doubled)},
               {"consistent", est.consistent}};
  const auto env = monotone_envelope(est.points);
  try {
    const double inv1 = eta_inverse_at(env, 1.0);
    summary["eta_inverse_at_one"] = num(inv1);
    summary["K"] = num(quasisimilarity_constant_bound(interpolate_eta(env, 1.0), inv1));
  } catch (const NumericalError& e) {
    summary["eta_inverse_at_one"] = std::string(to_string(e.kind()));
    summary["K"] = nullptr;
  }
  ctx.rep->emit(summary);
  return kExitOk;
}

int cmd_certify_dilatation(Context& ctx) {
  const auto kind = require_kind(ctx.flags.kind);
  const auto cand = load_black_box(ctx);
  const auto p = require_point(ctx.flags.p, "--p");
  const auto radii = ctx.flags.radii.empty() ? default_radii() : parse_list(ctx.flags.radii, "--radii");
  const auto rep = dilatation_report(cand.map, p, radii, kind);
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    ctx.rep->emit(Json{{"record", "radius"},
                       {"r", rep.radii[i]},
                       {"L", rep.L_values[i]},
                       {"l", rep.l_values[i]}});
  }
  ctx.rep->emit(Json{{"record", "summary"},
                     {"map", cand.map.label},
                     {"x", p.x},
                     {"y", p.y},
                     {"L_limit_est", rep.L_limit_est},
                     {"l_limit_est", rep.l_limit_est},
                     {"L_trend", rep.L_trend},
                     {"l_trend", rep.l_trend}});
  return kExitOk;
}

int cmd_certify_conformal(Context& ctx) {
  const auto kind = require_kind(ctx.flags.kind);
  const auto cand = load_black_box(ctx);
  auto points = sample_points(ctx.flags.points, ctx.cfg.seed, 5.0);
  if (cand.canonical) {
    // slope breaks of c are where non-conformality concentrates
    for (const auto& b : cand.canonical->c.breakpoints()) points.push_back({0.0, b.y});
  }
  const auto radii = ctx.flags.radii.empty() ? default_radii() : parse_list(ctx.flags.radii, "--radii");
  const auto res = conformality_test(cand.map, points, radii, ctx.flags.tolerance_conf, kind);
  if (ctx.flags.records) {
    for (const auto& r : res.reports) {
      ctx.rep->emit(Json{{"record", "point"},
                         {"x", r.point.x},
                         {"y", r.point.y},
                         {"L_limit_est", r.L_limit_est},
                         {"l_limit_est", r.l_limit_est}});
    }
  }
  ctx.rep->emit(Json{{"record", "summary"},
                     {"map", cand.map.label},
                     {"points", points.size()},
                     {"verdict", std::string(to_string(res.verdict))},
                     {"witness_x", res.witness ? Json(res.witness->x) : Json()},
                     {"witness_y", res.witness ? Json(res.witness->y) : Json()},
                     {"worst_ratio", num(res.worst_ratio)},
                     {"tolerance", ctx.flags.tolerance_conf}});
  return kExitOk;
}

int cmd_certify_foliation(Context& ctx) {
  const auto cand = load_black_box(ctx);
  const auto rect = require_rect(ctx.flags.rect);
  const auto ts = parse_list(ctx.flags.t_list, "--t-list");
  FoliationOptions fo;
  fo.threads = ctx.cfg.threads;
  const auto rep = foliation_certificate(cand.map, rect, ts, fo);
  for (const auto& s : rep.samples) {
    ctx.rep->emit(Json{{"record", "t"},
                       {"t", s.t},
                       {"variation", s.variation},
                       {"chains", s.chains},
                       {"stride", s.stride},
                       {"tiles_visited", s.tiles_visited}});
  }
  ctx.rep->emit(Json{{"record", "summary"},
                     {"map", cand.map.label},
                     {"exponent", rep.exponent},
                     {"r_squared", rep.r_squared},
                     {"max_over_min", num(rep.max_over_min)},
                     {"verdict", std::string(to_string(rep.verdict))}});
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_geometry_curvature(Context& ctx) {
  const auto g = MetricLieAlgebra::solvable_GA();
  const auto planes = random_plane_curvatures(g, ctx.flags.planes, ctx.cfg.seed, ctx.cfg.threads);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : planes) {
    lo = std::min(lo, s.K);
    hi = std::max(hi, s.K);
    if (ctx.flags.records) {
      ctx.rep->emit(Json{{"record", "plane"},
                         {"alpha", s.angles[0]},
                         {"beta", s.angles[1]},
                         {"gamma", s.angles[2]},
                         {"K", s.K}});
    }
  }
  ExtremesOptions eo;
  eo.threads = ctx.cfg.threads;
  const auto ex = curvature_extremes(g, eo);
  const auto op = curvature_operator_extremes(g);
  const bool matches = std::abs(ex.min - claimed_curvature_lower()) <= 1e-6 &&
                       std::abs(ex.max - claimed_curvature_upper()) <= 1e-6;
  ctx.rep->emit(Json{{"record", "summary"},
                     {"planes", planes.size()},
                     {"sample_min", num(lo)},
                     {"sample_max", num(hi)},
                     {"all_negative", hi < 0.0},
                     {"search_min", ex.min},
                     {"search_max", ex.max},
                     {"operator_min", op[0]},
                     {"operator_max", op[1]},
                     {"claimed_lower", claimed_curvature_lower()},
                     {"claimed_upper", claimed_curvature_upper()},
                     {"matches_claimed", matches}});
  return kExitOk;
}

int cmd_geometry_tau(Context& ctx) {
  const auto r = check_tau_isometry(MetricLieAlgebra::solvable_GA());
  ctx.rep->emit(Json{{"orthogonality_residual", r.orthogonality_residual},
                     {"automorphism_residual", r.automorphism_residual},
                     {"involution_residual", r.involution_residual},
                     {"pass", r.pass}});
  return r.pass ? kExitOk : kExitCheckFailed;
}

int cmd_geometry_lift(Context& ctx) {
  QSGroupElement e;
  if (!ctx.flags.g.empty()) e = load_element(ctx.flags.g, "--g");
  if (ctx.flags.point.empty()) throw UsageError("--point x,y,t is required");
  const auto v = parse_list(ctx.flags.point, "--point");
  if (v.size() != 3) throw UsageError("--point needs x,y,t");
  const auto r = lift_F_Cb(e.C, e.b, {v[0], v[1], v[2]});
  Json rec{{"x", r.x}, {"y", r.y}, {"t", r.t}};
  if (!ctx.flags.p.empty() || !ctx.flags.q.empty()) {
    const auto d = horosphere_distortion(e.C, e.b, v[2], require_point(ctx.flags.p, "--p"),
                                         require_point(ctx.flags.q, "--q"));
    rec["before"] = d.before;
    rec["after"] = d.after;
    rec["gap"] = d.gap();
  }
  ctx.rep->emit(rec);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boundary quasimetrics, quasisymmetric maps and curvature of R^2 x|_A R", "qsb"};
  app.fallthrough();
  app.require_subcommand(1);
  Flags fl;

  auto* o_seed = app.add_option("--seed", fl.seed, "master seed");
  auto* o_samples = app.add_option("--samples", fl.samples, "sample count");
  auto* o_threads = app.add_option("--threads", fl.threads, "worker threads");
  auto* o_format = app.add_option("--format", fl.format, "csv or jsonl");
  auto* o_out = app.add_option("--out", fl.out_path, "report file (default stdout)");
  app.add_option("--config", fl.config_path, "key = value config file");
  app.add_flag("--records", fl.records, "emit per-sample records");
  app.add_option("--kind", fl.kind, "quasimetric: D, Ds or De");
  app.add_option("--distribution", fl.distribution,
                 "pair sampler: mixture, uniform, logscale, degenerate, horizontal");
  app.add_option("--p", fl.p, "point x,y");
  app.add_option("--q", fl.q, "point x,y");
  app.add_option("--point", fl.point, "point of G_A as x,y,t");
  app.add_option("--rect", fl.rect, "rectangle a,b,c,d");
  app.add_option("--t-list", fl.t_list, "comma-separated negative heights");
  app.add_option("--radii", fl.radii, "comma-separated decreasing radii");
  app.add_option("--map", fl.map, "map file ('-' for stdin)");
  app.add_option("--map2", fl.map2, "second map file");
  app.add_option("--g", fl.g, "group element file");
  app.add_option("--g2", fl.h, "second group element file");
  app.add_option("--builtin", fl.builtin,
                 "identity, flip, swap, lambda:<t> or translation:<u>,<v>");
  app.add_option("--planes", fl.planes, "random planes for curvature");
  app.add_option("--points", fl.points, "random base points for conformality");
  app.add_option("--tolerance-conf", fl.tolerance_conf, "conformality tolerance on L/l - 1");

  app.add_subcommand("dist", "quasimetric distance between --p and --q");
  auto* check = app.add_subcommand("check", "sampled inequality checks");
  check->require_subcommand(1);
  for (const char* s : {"sandwich", "norms", "axioms"}) check->add_subcommand(s);
  auto* map = app.add_subcommand("map", "canonical maps");
  map->require_subcommand(1);
  for (const char* s : {"apply", "compose", "invert", "classify", "bound"}) map->add_subcommand(s);
  auto* group = app.add_subcommand("group", "quasisymmetry group elements");
  group->require_subcommand(1);
  for (const char* s : {"mul", "inv", "realize", "factorize"}) group->add_subcommand(s);
  auto* certify = app.add_subcommand("certify", "black-box map certification");
  certify->require_subcommand(1);
  for (const char* s : {"eta", "dilatation", "conformal", "foliation"}) certify->add_subcommand(s);
  auto* geometry = app.add_subcommand("geometry", "Lie algebra geometry");
  geometry->require_subcommand(1);
  for (const char* s : {"curvature", "tau-check", "lift"}) geometry->add_subcommand(s);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  std::string group_name, action;
  for (auto* sub : app.get_subcommands()) {
    group_name = sub->get_name();
    for (auto* leaf : sub->get_subcommands()) action = leaf->get_name();
  }

  Context ctx;
  ctx.flags = fl;
  std::ofstream file;
  try {
    if (!fl.config_path.empty()) ctx.cfg = load_config(fl.config_path);
    if (o_seed->count()) ctx.cfg.seed = fl.seed;
    if (o_samples->count()) ctx.cfg.samples = fl.samples;
    if (o_threads->count()) ctx.cfg.threads = fl.threads;
    if (o_out->count()) ctx.cfg.output_path = fl.out_path;
    if (o_format->count()) {
      const auto f = parse_format(fl.format);
      if (!f) throw UsageError("--format must be csv or jsonl");
      ctx.cfg.output_format = *f;
    }
    validate(ctx.cfg);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  ctx.roots.tolerance = ctx.cfg.tolerance_root;

  std::ostream* os = &out;
  if (!ctx.cfg.output_path.empty()) {
    file.open(ctx.cfg.output_path);
    if (!file) {
      err << "error: cannot write " << ctx.cfg.output_path << '\n';
      return kExitUsage;
    }
    os = &file;
  }
  Reporter rep(*os, ctx.cfg.output_format);
  ctx.rep = &rep;
  ctx.os = os;

  try {
    if (group_name == "dist") return cmd_dist(ctx);
    if (group_name == "check") {
      if (action == "sandwich") return cmd_check_sandwich(ctx);
      if (action == "norms") return cmd_check_norms(ctx);
      return cmd_check_axioms(ctx);
    }
    if (group_name == "map") return cmd_map(ctx, action);
    if (group_name == "group") return cmd_group(ctx, action);
    if (group_name == "certify") {
      if (action == "eta") return cmd_certify_eta(ctx);
      if (action == "dilatation") return cmd_certify_dilatation(ctx);
      if (action == "conformal") return cmd_certify_conformal(ctx);
      return cmd_certify_foliation(ctx);
    }
    if (action == "curvature") return cmd_geometry_curvature(ctx);
    if (action == "tau-check") return cmd_geometry_tau(ctx);
    return cmd_geometry_lift(ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    if (e.kind() == ErrorKind::Parse) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    rep.emit(Json{{"record", "error"},
                  {"error", std::string(to_string(e.kind()))},
                  {"message", e.what()}});
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    rep.emit(Json{{"record", "error"}, {"error", "Internal"}, {"message", e.what()}});
    return kExitCheckFailed;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace qsb::cli
