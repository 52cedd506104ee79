#include "qcext/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "qcext/analysis.hpp"
#include "qcext/beurling_ahlfors.hpp"
#include "qcext/decompose.hpp"
#include "qcext/douady_earle.hpp"
#include "qcext/errors.hpp"
#include "qcext/extensions.hpp"
#include "qcext/map_io.hpp"
#include "qcext/sampling.hpp"

namespace qcext::cli {
namespace {

using io::Json;
using sampling::Rng;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";  // no "-0"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// extend

struct ExtendOptions {
  std::string map_file;
  std::string method = "family";
  double a = 1.0;
  double alpha = 2.0;
  double im_scale = 2.0;
  std::optional<double> tol;
  int nodes = 512;
  GridSpec grid;
  std::string out = "-";
  std::string format = "csv";
  int threads = 1;
};

struct Row {
  double x, y, re, im, dilatation;
};

// Evaluates `eval` over the points in index order; workers fill disjoint
// slices so the output order never depends on scheduling.
std::vector<Row> evaluate_rows(const std::vector<HalfPlanePoint>& pts,
                               const std::function<Row(const HalfPlanePoint&)>& eval,
                               int threads) {
  std::vector<Row> rows(pts.size());
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(pts.size(), 1));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = w; i < pts.size(); i += workers) rows[i] = eval(pts[i]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_rows(const std::vector<Row>& rows, const std::string& format, std::ostream& os) {
  if (format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json row = {{"x", r.x}, {"y", r.y}, {"re", r.re}, {"im", r.im}};
      row["dilatation"] = std::isnan(r.dilatation) ? Json(nullptr) : Json(r.dilatation);
      arr.push_back(row);
    }
    os << arr.dump(1) << '\n';
    return;
  }
  os << "x,y,re,im,dilatation\n";
  for (const auto& r : rows) {
    os << format_number(r.x) << ',' << format_number(r.y) << ',' << format_number(r.re) << ','
       << format_number(r.im) << ',' << format_number(r.dilatation) << '\n';
  }
}

template <class Fn>
int with_output(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty() || path == "-") return fn(out);
  std::ofstream file(path);
  if (!file) throw DomainError("cannot write " + path);
  return fn(file);
}

int cmd_extend(const ExtendOptions& o, std::ostream& out) {
  const Json desc = io::read_json_file(o.map_file);
  const std::vector<HalfPlanePoint> pts = o.grid.points();
  std::vector<Row> rows;

  if (o.method == "de") {
    const CircleMap f = io::circle_map_from_json(desc);
    const double tol = o.tol.value_or(1e-12);
    // Grid points are carried to the disk by the Cayley map (z - i)/(z + i).
    rows = evaluate_rows(
        pts,
        [&](const HalfPlanePoint& z) {
          const Complex zeta = (z.to_complex() - Complex(0, 1)) / (z.to_complex() + Complex(0, 1));
          const Complex w = extend_de(f, zeta, tol, o.nodes);
          return Row{zeta.real(), zeta.imag(), w.real(), w.imag(), kNaN};
        },
        o.threads);
  } else {
    const RealMap f = io::map_from_json(desc);
    std::function<Row(const HalfPlanePoint&)> eval;
    if (o.method == "family" || o.method == "ns") {
      const ExtParams p = o.method == "ns" ? ExtParams{1.0, 2.0} : ExtParams{o.a, o.alpha};
      if (!(p.alpha >= 0.0)) throw DomainError("--alpha must be >= 0");
      eval = [f, p](const HalfPlanePoint& z) {
        const Complex v = extend_family(p, f, z);
        double d = kNaN;
        try {
          d = std::abs(beltrami_analytic(f, p, z));
        } catch (const DomainError&) {
          // Not defined for this map here (f' <= 0, or alpha = 0 without C^2).
        }
        return Row{z.x, z.y, v.real(), v.imag(), d};
      };
    } else if (o.method == "ba") {
      const BAConfig cfg{o.tol.value_or(1e-10), o.im_scale};
      eval = [f, cfg](const HalfPlanePoint& z) {
        const Complex v = extend_ba(f, z, cfg);
        return Row{z.x, z.y, v.real(), v.imag(), kNaN};
      };
    } else {
      throw DomainError("unknown method \"" + o.method + "\" (family|ns|ba|de)");
    }
    rows = evaluate_rows(pts, eval, o.threads);
  }
  return with_output(o.out, out, [&](std::ostream& os) {
    write_rows(rows, o.format, os);
    return kPass;
  });
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::string suite;
  std::string config_path;
  std::uint64_t seed = 0;
  int trials = -1;   // suite default when negative
  double tol = kNaN; // suite default when NaN
  std::string format = "text";
};

class Report {
 public:
  Report(std::string suite, std::string format, std::ostream& os)
      : suite_(std::move(suite)), json_(format == "json"), os_(os) {}

  void check(const std::string& name, double value, double bound, bool pass) {
    ++total_;
    if (pass) ++passed_;
    if (json_) {
      checks_.push_back({{"name", name},
                         {"value", std::isfinite(value) ? Json(value) : Json(nullptr)},
                         {"bound", bound},
                         {"pass", pass}});
      return;
    }
    std::ostringstream line;
    line << std::left << std::setw(44) << name << std::right << " value=" << std::setw(11)
         << std::setprecision(4) << std::scientific << value << " bound=" << std::setw(11) << bound
         << "  " << (pass ? "PASS" : "FAIL");
    os_ << line.str() << '\n';
  }

  void note(const std::string& text) {
    if (json_) {
      notes_.push_back(text);
    } else {
      os_ << "  " << text << '\n';
    }
  }

  int finish() {
    const bool ok = total_ > 0 && passed_ == total_;
    if (json_) {
      const Json doc = {{"suite", suite_}, {"checks", checks_}, {"notes", notes_},
                        {"passed", passed_}, {"total", total_}, {"pass", ok}};
      os_ << doc.dump(2) << '\n';
    } else {
      os_ << suite_ << ": " << passed_ << '/' << total_ << " checks passed -> "
          << (ok ? "PASS" : "FAIL") << '\n';
    }
    return ok ? kPass : kPropertyFailure;
  }

 private:
  std::string suite_;
  bool json_;
  std::ostream& os_;
  Json checks_ = Json::array();
  Json notes_ = Json::array();
  int total_ = 0;
  int passed_ = 0;
};

struct SuiteContext {
  Json config;
  Rng rng;
  int trials;
  double tol;
};

double config_number(const Json& cfg, const char* key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_number()) throw DomainError(std::string("config \"") + key + "\" must be a number");
  return cfg.at(key).get<double>();
}

std::string config_string(const Json& cfg, const char* key, const std::string& fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_string()) throw DomainError(std::string("config \"") + key + "\" must be a string");
  return cfg.at(key).get<std::string>();
}

GridSpec config_grid(const Json& cfg, GridSpec grid) {
  if (!cfg.contains("grid")) return grid;
  const Json& g = cfg.at("grid");
  if (!g.is_object()) throw DomainError("config \"grid\" must be an object");
  grid.x_min = config_number(g, "x_min", grid.x_min);
  grid.x_max = config_number(g, "x_max", grid.x_max);
  grid.y_min = config_number(g, "y_min", grid.y_min);
  grid.y_max = config_number(g, "y_max", grid.y_max);
  grid.nx = static_cast<int>(config_number(g, "nx", grid.nx));
  grid.ny = static_cast<int>(config_number(g, "ny", grid.ny));
  grid.validate();
  return grid;
}

std::optional<ExtParams> config_params(const Json& cfg) {
  if (!cfg.contains("a") && !cfg.contains("alpha")) return std::nullopt;
  return ExtParams{config_number(cfg, "a", 1.0), config_number(cfg, "alpha", 2.0)};
}

std::optional<RealMap> config_map(const Json& cfg, const char* key) {
  if (!cfg.contains(key)) return std::nullopt;
  return io::map_from_json(cfg.at(key));
}

std::string label(const char* what, int trial) {
  return std::string(what) + " #" + std::to_string(trial);
}

HalfPlanePoint random_point(Rng& rng, double x_span, double y_lo, double y_hi) {
  return {sampling::uniform(rng, -x_span, x_span), sampling::uniform(rng, y_lo, y_hi)};
}

int suite_homomorphism(SuiteContext& ctx, Report& rep) {
  const auto fixed_p = config_params(ctx.config);
  const auto fixed_f = config_map(ctx.config, "map");
  const auto fixed_g = config_map(ctx.config, "map_g");
  const auto grid = config_grid(ctx.config, {-2.0, 2.0, 1e-2, 2.0, 10, 10}).points();
  for (int t = 0; t < ctx.trials; ++t) {
    const ExtParams p = fixed_p.value_or(sampling::random_params(ctx.rng, -2, 2, 0.1, 5));
    const RealMap f = fixed_f.value_or(sampling::random_bump_map(ctx.rng));
    const RealMap g = fixed_g.value_or(sampling::random_bump_map(ctx.rng));
    double worst = 0.0;
    for (const auto& z : grid) {
      worst = std::max(worst, homomorphism_residual(p, f, g, {z}) / (1.0 + std::abs(z.to_complex())));
    }
    rep.check(label("E(f o g) = Ef o Eg, residual/(1+|z|)", t), worst, ctx.tol, worst <= ctx.tol);
  }
  return rep.finish();
}

int suite_boundary(SuiteContext& ctx, Report& rep) {
  const auto fixed_p = config_params(ctx.config);
  const auto fixed_f = config_map(ctx.config, "map");
  for (int t = 0; t < ctx.trials; ++t) {
    const ExtParams p = fixed_p.value_or(sampling::random_params(ctx.rng, -2, 2, 0.1, 5));
    const RealMap f = fixed_f.value_or(sampling::random_bump_map(ctx.rng));
    const DerivBounds b = f.bounds();
    const double C = 2.0 * b.hi * (std::abs(p.a) + std::abs(p.alpha - p.a) + 2.0 / p.alpha);
    double worst = 0.0;
    for (double y : {1e-1, 1e-2, 1e-3}) {
      worst = std::max(worst, boundary_residual(p, f, {-1.0, 1.0}, y) / y);
    }
    rep.check(label("sup |Ef(x+iy) - f(x)| / y", t), worst, C, worst <= C);
  }
  return rep.finish();
}

std::vector<HalfPlanePoint> with_critical_diagonal(std::vector<HalfPlanePoint> pts,
                                                   const ExtParams& p, const GridSpec& grid) {
  // Points where x - (alpha - a) y = 0, i.e. theta = f'(0) / f'(x + a y).
  for (const auto& z : GridSpec{0.0, 0.0, grid.y_min, grid.y_max, 2, grid.ny}.points()) {
    pts.push_back({(p.alpha - p.a) * z.y, z.y});
  }
  return pts;
}

int suite_dilatation(SuiteContext& ctx, Report& rep) {
  const auto fixed_f = config_map(ctx.config, "map");
  const ExtParams p_cfg = config_params(ctx.config).value_or(ExtParams{1.0, 2.0});
  const std::string expect = config_string(ctx.config, "expect", "quasiconformal");
  if (expect != "quasiconformal" && expect != "not_quasiconformal") {
    throw DomainError("config \"expect\" must be quasiconformal or not_quasiconformal");
  }
  const double gap_tol = std::isnan(ctx.tol) ? 1e-5 : ctx.tol;
  const GridSpec base_grid = config_grid(ctx.config, {});

  if (fixed_f && expect == "not_quasiconformal") {
    const double threshold = config_number(ctx.config, "threshold", 0.999);
    double sup = 0.0;
    for (int level = 0; level < 4; ++level) {
      GridSpec g = base_grid;
      g.y_max = base_grid.y_max * std::pow(10.0, level);
      g.nx = g.ny = base_grid.nx * (level + 1);
      sup = sup_dilatation(*fixed_f, p_cfg, with_critical_diagonal(g.points(), p_cfg, g));
      rep.note("level " + std::to_string(level) + ": y_max=" + format_number(g.y_max) +
               " grid sup dilatation=" + format_number(sup));
    }
    const bool witness = sup >= threshold;
    rep.check("grid sup dilatation >= threshold", sup, threshold, witness);
    rep.note(witness ? "flag: not quasiconformal (expected)" : "flag: no witness found");
    return rep.finish();
  }

  const int trials = fixed_f ? 1 : ctx.trials;
  for (int t = 0; t < trials; ++t) {
    const ExtParams p = fixed_f ? p_cfg : sampling::random_params(ctx.rng, -2, 2, 0.1, 5);
    const RealMap f = fixed_f.value_or(sampling::random_bump_map(ctx.rng));
    if (!f.is_bilipschitz() || !(p.alpha > 0.0)) {
      throw DomainError("expect=quasiconformal needs a bi-Lipschitz map and alpha > 0");
    }
    const double bound = dilatation_bound(p, f.bounds());
    const double sup = sup_dilatation(f, p, base_grid.points());
    rep.check(label("grid sup dilatation <= certified bound", t), sup, bound + 1e-9,
              sup <= bound + 1e-9 && sup < 1.0);
    double worst_gap = 0.0;
    for (int k = 0; k < 5; ++k) {
      const HalfPlanePoint z = random_point(ctx.rng, 2.0, 0.05, 2.0);
      worst_gap = std::max(worst_gap, std::abs(dilatation_report(f, p, z, 1e-4).gap));
    }
    rep.check(label("|numeric - analytic| at h=1e-4", t), worst_gap, gap_tol, worst_gap <= gap_tol);
  }
  return rep.finish();
}

int suite_pde(SuiteContext& ctx, Report& rep) {
  const double exact_tol = std::isnan(ctx.tol) ? 1e-8 : ctx.tol;
  const RealMap square = RealMap::monomial(2);
  double worst = 0.0;
  for (const HalfPlanePoint z : {HalfPlanePoint{0.3, 0.7}, {-1.2, 0.4}, {0.9, 1.5}}) {
    worst = std::max(worst, pde_residual(square, {1.0, 2.0}, z, 1e-3));
  }
  rep.check("x^2 under (1,2): wave-equation residual", worst, exact_tol, worst <= exact_tol);

  const auto fixed_p = config_params(ctx.config);
  for (int t = 0; t < ctx.trials; ++t) {
    const ExtParams p = fixed_p.value_or(sampling::random_params(ctx.rng, -1, 1, 0.5, 2));
    const double amp = sampling::uniform(ctx.rng, 0.1, 0.5);
    const RealMap f = RealMap::identity_plus_bump({0.0, 1.0, amp});
    // Both stencil feet inside the bump where f is a polynomial.
    const double u = sampling::uniform(ctx.rng, -0.5, 0.6);
    const double v = u - sampling::uniform(ctx.rng, 0.1, 0.5);
    const double y = (u - v) / p.alpha;
    const HalfPlanePoint z{u - p.a * y, y};
    const double h = std::min(1e-2, y / 4);
    const double ratio = pde_residual(f, p, z, h) / pde_residual(f, p, z, h / 2);
    rep.check(label("residual(h)/residual(h/2) in [3.5, 4.5]", t), ratio, 4.0, ratio >= 3.5 && ratio <= 4.5);
  }
  return rep.finish();
}

int suite_group_action(SuiteContext& ctx, Report& rep) {
  const double tol = std::isnan(ctx.tol) ? 1e-12 : ctx.tol;
  const Extension e01 = family_extension({0.0, 1.0});
  for (int t = 0; t < ctx.trials; ++t) {
    const ExtParams g1 = sampling::random_params(ctx.rng, -2, 2, 0.2, 5);
    const ExtParams g2 = sampling::random_params(ctx.rng, -2, 2, 0.2, 5);
    const RealMap f = sampling::random_bump_map(ctx.rng);
    const HalfPlanePoint z = random_point(ctx.rng, 2.0, 0.05, 2.0);
    const double orbit = std::abs(act(g1, e01, f, z) - extend_family(g1, f, z));
    rep.check(label("(a,alpha)E_{0,1} = E_{a,alpha}", t), orbit, tol, orbit <= tol);
    const double nested =
        std::abs(act(g1, acted(g2, e01), f, z) - act(group_mul(g1, g2), e01, f, z));
    const double scale = 1.0 + std::abs(extend_family(group_mul(g1, g2), f, z));
    rep.check(label("g1(g2 E) = (g1 g2)E, relative", t), nested / scale, 10 * tol,
              nested / scale <= 10 * tol);
    const Complex neutral = act(group_identity(), e01, f, z) - e01(f, z);
    rep.check(label("(0,1)E = E", t), std::abs(neutral), 0.0, neutral == Complex(0.0, 0.0));
  }
  return rep.finish();
}

int suite_ba_naturality(SuiteContext& ctx, Report& rep) {
  const double quad_tol = std::isnan(ctx.tol) ? 1e-10 : ctx.tol;
  const double im_scale = config_number(ctx.config, "im_scale", 2.0);
  const BAConfig cfg{quad_tol, im_scale};
  for (int t = 0; t < ctx.trials; ++t) {
    const RealMap f = sampling::random_bump_map(ctx.rng);
    const double c = sampling::uniform(ctx.rng, 0.5, 2.0);
    const double d = sampling::uniform(ctx.rng, -1.0, 1.0);
    const RealMap g = RealMap::affine(c, d);
    const HalfPlanePoint z = random_point(ctx.rng, 2.0, 0.05, 2.0);
    if (im_scale == 2.0) {
      const double fix = std::abs(extend_ba(g, z, cfg) - (c * z.to_complex() + d));
      rep.check(label("E_AB fixes affine maps", t), fix, 2 * quad_tol, fix <= 2 * quad_tol);
      const double nat = ba_affine_naturality_residual(f, g, z, cfg);
      rep.check(label("E_AB(f o g) = E_AB f o E_AB g", t), nat, 10 * quad_tol, nat <= 10 * quad_tol);
    } else {
      const double im = extend_ba(RealMap::identity(), z, cfg).imag();
      const double expected = 0.5 * im_scale * z.y;
      rep.check(label("Im E_AB(Id) = im_scale * y / 2", t), std::abs(im - expected), quad_tol,
                std::abs(im - expected) <= quad_tol);
    }
  }
  return rep.finish();
}

int suite_de_naturality(SuiteContext& ctx, Report& rep) {
  const double tol = std::isnan(ctx.tol) ? 1e-5 : ctx.tol;
  for (int t = 0; t < ctx.trials; ++t) {
    const CircleMap f = sampling::random_circle_map(ctx.rng, 0.3);
    const Mobius m = sampling::random_mobius(ctx.rng, 0.5);
    const Complex z = std::polar(sampling::uniform(ctx.rng, 0.0, 0.6),
                                 sampling::uniform(ctx.rng, 0.0, 6.283185307179586));
    const double fix = std::abs(extend_de(CircleMap::mobius(m), z) - m(z));
    rep.check(label("E_DE(m|S) = m", t), fix, 1e-6, fix <= 1e-6);
    const double post = de_naturality_residual(f, m, z, Naturality::post_composition);
    rep.check(label("E_DE(m o f) = m o E_DE f", t), post, tol, post <= tol);
    const double pre = de_naturality_residual(f, m, z, Naturality::pre_composition);
    rep.check(label("E_DE(f o m) = E_DE f o m", t), pre, tol, pre <= tol);
  }
  return rep.finish();
}

int suite_decompose(SuiteContext& ctx, Report& rep) {
  const double tol = std::isnan(ctx.tol) ? 1e-6 : ctx.tol;
  std::vector<double> eps_list{0.1, 0.25};
  if (ctx.config.contains("eps0")) eps_list = {config_number(ctx.config, "eps0", 0.25)};
  const auto fixed_f = config_map(ctx.config, "map");
  for (int t = 0; t < ctx.trials; ++t) {
    const RealMap f = fixed_f.value_or(sampling::random_bilipschitz_map(ctx.rng, 4.0));
    const DerivBounds b = f.bounds();
    const double L = std::max(b.hi, 1.0 / b.lo);
    for (double eps0 : eps_list) {
      const std::string tag = label("decompose", t) + " eps0=" + format_number(eps0);
      Factorization fac;
      try {
        fac = decompose_bilip(f, eps0, tol);
      } catch (const ToleranceFailure& e) {
        rep.note(tag + ": " + e.what());
        rep.check(tag + " round trip", kNaN, tol, false);
        continue;
      }
      double worst_dev = 0.0;
      for (const auto& factor : fac.factors) {
        const DerivBounds fb = factor.bounds();
        worst_dev = std::max({worst_dev, 1.0 - fb.lo, fb.hi - 1.0});
      }
      rep.check(tag + " max certified |f_j' - 1|", worst_dev, eps0, worst_dev < eps0);
      rep.check(tag + " round trip on [-10, 10]", fac.recomposition_error, tol,
                fac.recomposition_error <= tol);
      const double eps = decomposition_epsilon(eps0);
      const double cap = std::ceil(std::log(L) / std::log1p(eps)) + 2.0;
      const double count = static_cast<double>(fac.factors.size());
      rep.check(tag + " factor count", count, cap, count <= cap);
    }
  }
  return rep.finish();
}

struct SuiteEntry {
  const char* name;
  int default_trials;
  double default_tol;  // NaN: suite picks per-check tolerances
  int (*run)(SuiteContext&, Report&);
};

constexpr SuiteEntry kSuites[] = {
    {"homomorphism", 20, 1e-10, suite_homomorphism},
    {"boundary", 20, kNaN, suite_boundary},
    {"dilatation", 10, kNaN, suite_dilatation},
    {"pde", 10, kNaN, suite_pde},
    {"group-action", 20, kNaN, suite_group_action},
    {"ba-naturality", 20, kNaN, suite_ba_naturality},
    {"de-naturality", 5, kNaN, suite_de_naturality},
    {"decompose", 3, kNaN, suite_decompose},
};

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const SuiteEntry* entry = nullptr;
  for (const auto& s : kSuites) {
    if (o.suite == s.name) entry = &s;
  }
  if (!entry) throw DomainError("unknown suite \"" + o.suite + "\"");
  Json config = Json::object();
  if (!o.config_path.empty()) {
    config = io::read_json_file(o.config_path);
    if (!config.is_object()) throw DomainError("config must be a JSON object");
  }
  SuiteContext ctx{config, Rng(o.seed), o.trials >= 0 ? o.trials : entry->default_trials,
                   std::isnan(o.tol) ? entry->default_tol : o.tol};
  if (ctx.config.contains("trials") && o.trials < 0) {
    ctx.trials = static_cast<int>(config_number(ctx.config, "trials", ctx.trials));
  }
  Report rep(entry->name, o.format, out);
  return entry->run(ctx, rep);
}

// ---------------------------------------------------------------------------
// decompose / info

int cmd_decompose(const std::string& map_file, double eps0, double tol, const std::string& path,
                  std::ostream& out) {
  const RealMap f = io::map_from_json(io::read_json_file(map_file));
  const Factorization fac = decompose_bilip(f, eps0, tol);
  return with_output(path, out, [&](std::ostream& os) {
    os << io::factorization_to_json(fac).dump(2) << '\n';
    return kPass;
  });
}

int cmd_info(const std::string& map_file, std::ostream& out) {
  const RealMap f = io::map_from_json(io::read_json_file(map_file));
  const DerivBounds b = f.bounds();
  Json info = {{"kind", std::string(to_string(f.kind()))},
               {"c2", f.is_c2()},
               {"bilipschitz", f.is_bilipschitz()}};
  if (f.is_bilipschitz()) {
    info["deriv_lo"] = b.lo;
    info["deriv_hi"] = b.hi;
    info["L"] = std::max(b.hi, 1.0 / b.lo);
    info["m_estimate"] = estimate_m(f, {-5.0, 5.0}, {1e-2, 5.0}, 41);
  }
  out << info.dump(2) << '\n';
  return kPass;
}

void add_grid_options(CLI::App& cmd, GridSpec& grid) {
  cmd.add_option("--x-min", grid.x_min, "grid x minimum")->capture_default_str();
  cmd.add_option("--x-max", grid.x_max, "grid x maximum")->capture_default_str();
  cmd.add_option("--y-min", grid.y_min, "grid y minimum (> 0, log spacing)")->capture_default_str();
  cmd.add_option("--y-max", grid.y_max, "grid y maximum")->capture_default_str();
  cmd.add_option("--nx", grid.nx, "grid points in x")->capture_default_str();
  cmd.add_option("--ny", grid.ny, "grid points in y")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasiconformal boundary-extension toolkit"};
  app.name(args.empty() ? "qcext" : args.front());
  app.require_subcommand(1);

  ExtendOptions ext;
  auto* extend = app.add_subcommand("extend", "evaluate an extension on a grid");
  extend->add_option("--map", ext.map_file, "map description (JSON)")->required();
  extend->add_option("--method", ext.method, "family|ns|ba|de")
      ->check(CLI::IsMember({"family", "ns", "ba", "de"}))
      ->capture_default_str();
  extend->add_option("--a", ext.a, "family parameter a")->capture_default_str();
  extend->add_option("--alpha", ext.alpha, "family parameter alpha >= 0")->capture_default_str();
  extend->add_option("--im-scale", ext.im_scale, "Beurling-Ahlfors imaginary scale")
      ->capture_default_str();
  extend->add_option("--tol", ext.tol, "quadrature (ba) or solver (de) tolerance");
  extend->add_option("--nodes", ext.nodes, "circle nodes for de")->capture_default_str();
  extend->add_option("--out", ext.out, "output path, - for stdout")->capture_default_str();
  extend->add_option("--format", ext.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  extend->add_option("--threads", ext.threads, "worker threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  add_grid_options(*extend, ext.grid);

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", ver.suite,
                     "homomorphism|boundary|dilatation|pde|group-action|ba-naturality|"
                     "de-naturality|decompose")
      ->required();
  verify->add_option("--config", ver.config_path, "suite configuration (JSON)");
  verify->add_option("--seed", ver.seed, "random seed")->capture_default_str();
  verify->add_option("--trials", ver.trials, "number of random trials");
  verify->add_option("--tol", ver.tol, "primary tolerance override");
  verify->add_option("--format", ver.format, "text|json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::string dec_map;
  std::string dec_out = "-";
  double dec_eps0 = 0.25;
  double dec_tol = 1e-6;
  auto* decompose = app.add_subcommand("decompose", "factor a map into near-identity maps");
  decompose->add_option("--map", dec_map, "map description (JSON)")->required();
  decompose->add_option("--eps0", dec_eps0, "factor closeness, 0 < eps0 < 1")->capture_default_str();
  decompose->add_option("--tol", dec_tol, "round-trip tolerance on [-10, 10]")->capture_default_str();
  decompose->add_option("--out", dec_out, "output path, - for stdout")->capture_default_str();

  std::string info_map;
  auto* info = app.add_subcommand("info", "describe a map");
  info->add_option("--map", info_map, "map description (JSON)")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  try {
    if (*extend) return cmd_extend(ext, out);
    if (*verify) return cmd_verify(ver, out);
    if (*decompose) return cmd_decompose(dec_map, dec_eps0, dec_tol, dec_out, out);
    if (*info) return cmd_info(info_map, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsageError;
}

}  // namespace qcext::cli
