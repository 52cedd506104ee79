#include "qcext/map_io.hpp"

#include <fstream>
#include <sstream>

#include "qcext/errors.hpp"

namespace qcext::io {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw DomainError(std::string("map description is missing \"") + key + "\"");
  }
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw DomainError(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

std::vector<double> numbers(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw DomainError(std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw DomainError(std::string("\"") + key + "\" must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string kind_of(const Json& j) {
  const Json& k = field(j, "kind");
  if (!k.is_string()) throw DomainError("\"kind\" must be a string");
  return k.get<std::string>();
}

BumpProfile bump_from_json(const Json& j) {
  return {number(j, "center"), number(j, "halfwidth"), number(j, "amplitude")};
}

}  // namespace

RealMap map_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "identity") return RealMap::identity();
  if (kind == "affine") return RealMap::affine(number(j, "slope"), number_or(j, "offset", 0.0));
  if (kind == "bump") {
    std::vector<BumpProfile> bumps;
    if (j.contains("bumps")) {
      const Json& list = field(j, "bumps");
      if (!list.is_array()) throw DomainError("\"bumps\" must be an array");
      for (const auto& b : list) bumps.push_back(bump_from_json(b));
    } else {
      bumps.push_back(bump_from_json(j));
    }
    return RealMap::identity_plus_bumps(std::move(bumps));
  }
  if (kind == "power_integral") {
    const RealMap base = map_from_json(field(j, "base"));
    const double exponent = number(j, "exponent");
    const double inner = number_or(j, "inner_exponent", 0.0);
    if (inner == 0.0) return power_integral_map(base, exponent);
    return power_integral_map(std::make_shared<const PowerTable>(base, exponent),
                              std::make_shared<const PowerTable>(base, inner));
  }
  if (kind == "compose") {
    if (j.contains("maps")) {
      const Json& list = field(j, "maps");
      if (!list.is_array() || list.empty()) throw DomainError("\"maps\" must be a nonempty array");
      RealMap result = map_from_json(list.back());
      for (auto it = list.rbegin() + 1; it != list.rend(); ++it) {
        result = compose(map_from_json(*it), result);
      }
      return result;
    }
    return compose(map_from_json(field(j, "outer")), map_from_json(field(j, "inner")));
  }
  if (kind == "taper") return taper(map_from_json(field(j, "base")), number(j, "T"));
  if (kind == "sampled") return RealMap::sampled_monotone(numbers(j, "x"), numbers(j, "y"));
  if (kind == "monomial") {
    const double d = number(j, "degree");
    if (d != static_cast<int>(d)) throw DomainError("\"degree\" must be an integer");
    return RealMap::monomial(static_cast<int>(d));
  }
  throw DomainError("unknown map kind \"" + kind + "\"");
}

Json map_to_json(const RealMap& f) {
  return std::visit(
      overloaded{
          [](const AffineParams& p) -> Json {
            return {{"kind", "affine"}, {"slope", p.slope}, {"offset", p.offset}};
          },
          [](const BumpParams& p) -> Json {
            Json list = Json::array();
            for (const auto& b : p.bumps) {
              list.push_back({{"center", b.center}, {"halfwidth", b.halfwidth},
                              {"amplitude", b.amplitude}});
            }
            return {{"kind", "bump"}, {"bumps", list}};
          },
          [](const PowerIntegralParams& p) -> Json {
            return {{"kind", "power_integral"},
                    {"base", map_to_json(p.outer->base())},
                    {"exponent", p.outer->exponent()},
                    {"inner_exponent", p.inner->exponent()}};
          },
          [](const CompositionParams& p) -> Json {
            return {{"kind", "compose"}, {"outer", map_to_json(p.outer)},
                    {"inner", map_to_json(p.inner)}};
          },
          [](const TaperParams& p) -> Json {
            return {{"kind", "taper"}, {"base", map_to_json(p.base)}, {"T", p.T}};
          },
          [](const SampledParams& p) -> Json {
            return {{"kind", "sampled"}, {"x", p.xs}, {"y", p.ys}};
          },
          [](const MonomialParams& p) -> Json {
            return {{"kind", "monomial"}, {"degree", p.degree}};
          },
      },
      f.node().params);
}

Mobius mobius_from_json(const Json& j) {
  const auto c = numbers(j, "c");
  if (c.size() != 2) throw DomainError("\"c\" must be [re, im]");
  return {number_or(j, "phi", 0.0), {c[0], c[1]}};
}

CircleMap circle_map_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "circle_identity") return CircleMap::identity();
  if (kind == "circle_trig") {
    std::vector<double> cs = j.contains("cos") ? numbers(j, "cos") : std::vector<double>{};
    std::vector<double> ss = j.contains("sin") ? numbers(j, "sin") : std::vector<double>{};
    return CircleMap::trig(number_or(j, "shift", 0.0), std::move(cs), std::move(ss));
  }
  if (kind == "mobius") return CircleMap::mobius(mobius_from_json(j));
  if (kind == "circle_compose") {
    return compose(circle_map_from_json(field(j, "outer")),
                   circle_map_from_json(field(j, "inner")));
  }
  throw DomainError("unknown circle map kind \"" + kind + "\"");
}

Json factorization_to_json(const Factorization& fac) {
  Json list = Json::array();
  for (const auto& f : fac.factors) list.push_back(map_to_json(f));
  return {{"eps0", fac.eps0},
          {"rounds", fac.rounds},
          {"recomposition_error", fac.recomposition_error},
          {"factors", list}};
}

Factorization factorization_from_json(const Json& j) {
  Factorization fac;
  fac.eps0 = number(j, "eps0");
  fac.recomposition_error = number_or(j, "recomposition_error", 0.0);
  fac.rounds = static_cast<int>(number_or(j, "rounds", 0.0));
  const Json& list = field(j, "factors");
  if (!list.is_array() || list.empty()) throw DomainError("\"factors\" must be a nonempty array");
  for (const auto& f : list) fac.factors.push_back(map_from_json(f));
  return fac;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

}  // namespace qcext::io
