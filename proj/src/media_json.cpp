#include "kpp/media_json.hpp"

#include "kpp/errors.hpp"
#include "kpp/json_util.hpp"

namespace kpp::media {

using nlohmann::json;
using namespace kpp::json_util;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Library parameter errors surface as config errors tagged with the path.
template <class Build>
auto build_at(const std::string& path, Build&& build) {
  try {
    return build();
  } catch (const ParameterError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

json to_json(const PeriodicProfile& profile) {
  return std::visit(
      overloaded{
          [](const ConstantProfile& c) { return json{{"kind", "constant"}, {"value", c.value}}; },
          [](const TwoValueProfile& t) {
            return json{{"kind", "two_value"}, {"high", t.high}, {"low", t.low}, {"fraction", t.fraction}};
          },
          [](const CosineProfile& c) {
            return json{{"kind", "cosine"}, {"mean", c.mean}, {"amplitude", c.amplitude}};
          },
          [](const SampledProfile& s) { return json{{"kind", "sampled"}, {"values", s.values}}; },
      },
      profile.spec());
}

json to_json(const PhaseMap& phase) {
  return std::visit(
      overloaded{
          [](const LogPowerPhase& p) {
            return json{{"kind", "log_power"}, {"alpha", p.alpha}, {"beta", p.beta}};
          },
          [](const PowerPhase& p) { return json{{"kind", "power"}, {"alpha", p.alpha}}; },
          [](const XOverLogPhase& p) { return json{{"kind", "x_over_log"}, {"alpha", p.alpha}}; },
          [](const AffinePhase& p) { return json{{"kind", "affine"}, {"L", p.length}}; },
      },
      phase.spec());
}

json to_json(const TwoValueSequences& s) {
  return json{{"mu_plus", s.mu_plus()},
              {"mu_minus", s.mu_minus()},
              {"x_seq", s.x_seq()},
              {"y_seq", s.y_seq()}};
}

json to_json(const Medium& medium) {
  if (const auto* c = medium.composed_part()) {
    return json{{"profile", to_json(c->profile)}, {"phase", to_json(c->phase)}};
  }
  const auto* t = medium.two_value_part();
  json tv = to_json(t->sequences);
  tv["left_value"] = t->left_value;
  return json{{"two_value", tv}};
}

PeriodicProfile profile_from_json(const json& j, const std::string& path) {
  const std::string kind = get_string(j, "kind", path);
  return build_at(path, [&] {
    if (kind == "constant") return PeriodicProfile::constant(get_number(j, "value", path));
    if (kind == "two_value") {
      return PeriodicProfile::two_value(get_number(j, "high", path), get_number(j, "low", path),
                                        get_number_or(j, "fraction", path, 0.5));
    }
    if (kind == "cosine") {
      return PeriodicProfile::cosine(get_number(j, "mean", path), get_number(j, "amplitude", path));
    }
    if (kind == "sampled") return PeriodicProfile::sampled(get_number_array(j, "values", path));
    throw ConfigError(join(path, "kind") + ": unknown profile kind '" + kind + "'");
  });
}

PhaseMap phase_from_json(const json& j, const std::string& path) {
  const std::string kind = get_string(j, "kind", path);
  return build_at(path, [&] {
    if (kind == "log_power") {
      return PhaseMap::log_power(get_number(j, "alpha", path), get_number(j, "beta", path));
    }
    if (kind == "power") return PhaseMap::power(get_number(j, "alpha", path));
    if (kind == "x_over_log") return PhaseMap::x_over_log(get_number(j, "alpha", path));
    if (kind == "affine") return PhaseMap::affine(get_number(j, "L", path));
    throw ConfigError(join(path, "kind") + ": unknown phase kind '" + kind + "'");
  });
}

Medium medium_from_json(const json& j, double x_max, const std::string& path) {
  require_object(j, path);
  if (j.contains("two_value")) {
    const std::string tpath = join(path, "two_value");
    const json& t = require_object(j.at("two_value"), tpath);
    const double mu_plus = get_number(t, "mu_plus", tpath);
    const double mu_minus = get_number(t, "mu_minus", tpath);
    std::optional<double> left;
    if (t.contains("left_value")) left = get_number(t, "left_value", tpath);
    return build_at(tpath, [&] {
      if (t.contains("geometric")) {
        const std::string gpath = join(tpath, "geometric");
        const json& g = require_object(t.at("geometric"), gpath);
        auto seq = geometric_sequences(mu_plus, mu_minus, get_number(g, "K1", gpath),
                                       get_number(g, "K2", gpath), get_number(g, "x0", gpath),
                                       x_max);
        return Medium::two_value(std::move(seq), x_max, left);
      }
      TwoValueSequences seq(mu_plus, mu_minus, get_number_array(t, "x_seq", tpath),
                            get_number_array(t, "y_seq", tpath));
      return Medium::two_value(std::move(seq), x_max, left);
    });
  }
  if (!j.contains("profile") || !j.contains("phase")) {
    throw ConfigError(path + ": expected {\"profile\", \"phase\"} or {\"two_value\"}");
  }
  auto profile = profile_from_json(j.at("profile"), join(path, "profile"));
  auto phase = phase_from_json(j.at("phase"), join(path, "phase"));
  return build_at(path, [&] { return Medium::composed(std::move(profile), phase, x_max); });
}

}  // namespace kpp::media
