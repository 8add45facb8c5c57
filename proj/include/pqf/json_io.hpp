#pragma once

#include <json.hpp>

#include "wtt.hpp"

// JSON forms of the library's values and reports.

namespace pqf::io {

using nlohmann::json;

inline std::string rational_str(const mpq_class& r) { return r.get_str(); }

inline mpq_class parse_rational(const json& j) {
  if (j.is_number_integer()) return mpq_class(mpz_class(j.dump()));
  if (j.is_string()) {
    mpq_class r;
    if (r.set_str(j.get<std::string>(), 10) != 0 || r.get_den() == 0)
      throw error("cannot parse rational '" + j.get<std::string>() + "'");
    r.canonicalize();
    return r;
  }
  throw error("expected a rational (integer or \"a/b\" string), got " + j.dump());
}

// ZpPoint: {"kind":"nat","value":m} | {"kind":"periodic","pre":[..],"period":[..]}
inline json to_json(const ZpPoint& z) {
  if (z.is_nat()) {
    try {
      return {{"kind", "nat"}, {"value", z.nat_value()}};
    } catch (const error&) {
    }
  }
  return {{"kind", "periodic"}, {"pre", z.preperiod()}, {"period", z.period()}};
}

inline ZpPoint zp_from_json(u64 p, const json& j) {
  if (j.is_string()) return ZpPoint::parse(p, j.get<std::string>());
  if (j.is_number_integer()) return ZpPoint::integer(p, j.get<std::int64_t>());
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "nat") return ZpPoint::nat(p, j.at("value").get<u64>());
  if (kind == "periodic")
    return ZpPoint::periodic(p, j.at("pre").get<std::vector<unsigned>>(), j.at("period").get<std::vector<unsigned>>());
  throw error("unknown Z_p point kind '" + kind + "'");
}

// PHat: {"k":3,"n":3}, or the string "3/8" on input.
inline json to_json(const PHat& t) { return {{"k", t.num()}, {"n", t.denom_exp()}}; }

inline PHat phat_from_json(u64 p, const json& j) {
  if (j.is_string()) return PHat::parse(p, j.get<std::string>());
  if (j.is_number_integer()) return PHat::make(p, j.get<std::int64_t>(), 0);
  return PHat::make(p, j.at("k").get<std::int64_t>(), j.at("n").get<unsigned>());
}

// CycloNum: {"N":n,"coeffs":["a/b",..]}; a bare rational is accepted on input.
inline json to_json(const CycloNum& a) {
  json coeffs = json::array();
  for (const auto& c : a.coeffs()) coeffs.push_back(rational_str(c));
  return {{"N", a.conductor()}, {"coeffs", coeffs}};
}

inline CycloNum cyclo_from_json(u64 p, const json& j) {
  if (j.is_number_integer() || j.is_string()) return CycloNum::rational(p, parse_rational(j));
  std::vector<mpq_class> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(parse_rational(c));
  const auto n = j.at("N").get<unsigned>();
  if (coeffs.size() > cyclo_degree(p, n)) throw error("too many coefficients for conductor exponent " + std::to_string(n));
  return CycloNum::from_coeffs(p, n, coeffs);
}

inline json to_json(const FieldCtx& c) { return {{"p", c.p}, {"q", c.q}, {"N", c.N}, {"M", c.M}}; }

// QAdicNum: q^shift * sum coeffs[i] zeta^i + O(q^precision).
inline json to_json(const QAdicNum& x) {
  json j = {{"ctx", to_json(*x.ctx())}};
  if (x.is_exact_zero()) {
    j["exact_zero"] = true;
    return j;
  }
  json coeffs = json::array();
  for (const auto& c : x.coords()) coeffs.push_back(c.get_str());
  j["shift"] = x.shift();
  j["precision"] = x.precision();
  j["coeffs"] = coeffs;
  j["valuation"] = x.valuation().to_string();
  return j;
}

inline json to_json(const QNorm& n) {
  json j = {{"value", rational_str(n.value())}};
  if (n.v)
    j["valuation"] = *n.v;
  else
    j["valuation"] = nullptr;
  return j;
}

inline json valuation_json(const std::optional<int>& v) { return v ? json(*v) : json("inf"); }

template <class V>
json to_json(const LCFn<V>& f) {
  json vals = json::array();
  for (const auto& v : f.values) vals.push_back(to_json(v));
  return {{"level", f.level}, {"values", vals}};
}

inline ExactFn lcfn_from_json(u64 p, const json& j) {
  ExactFn f{p, j.at("level").get<unsigned>(), {}};
  for (const auto& v : j.at("values")) f.values.push_back(cyclo_from_json(p, v));
  if (f.values.size() != ipow(p, f.level))
    throw error("level " + std::to_string(f.level) + " needs " + std::to_string(ipow(p, f.level)) + " values, got " +
                std::to_string(f.values.size()));
  return f;
}

inline std::string phat_str(const PHat& t) { return t.to_string(); }

template <class V>
json to_json(const DualFn<V>& F) {
  json sup = json::array();
  for (const auto& [t, v] : F.support) sup.push_back({{"t", phat_str(t)}, {"v", to_json(v)}});
  return {{"support", sup}};
}

inline ExactDual dual_from_json(u64 p, const json& j) {
  ExactDual F{p, {}};
  for (const auto& e : j.at("support")) F.add_to(phat_from_json(p, e.at("t")), cyclo_from_json(p, e.at("v")));
  return F;
}

// MeasureHat: {"p":p,"terms":[{"coeff":..,"shift":"k/p^n","base":{"kind":"table"|"aq"|"dirac",..}}]}
inline json to_json(const MeasureHat& mu) {
  json terms = json::array();
  for (const auto& t : mu.terms) {
    json base;
    if (const auto* F = std::get_if<ExactDual>(&t.base)) {
      base = to_json(*F);
      base["kind"] = "table";
    } else if (const auto* A = std::get_if<AqBase>(&t.base)) {
      base = {{"kind", "aq"}, {"q", A->q}};
    } else {
      base = {{"kind", "dirac"}};
    }
    terms.push_back({{"coeff", to_json(t.coeff)}, {"shift", phat_str(t.shift)}, {"base", base}});
  }
  return {{"p", mu.p}, {"terms", terms}};
}

inline MeasureHat measure_from_json(const json& j, u64 default_p) {
  MeasureHat mu;
  mu.p = j.contains("p") ? j.at("p").get<u64>() : default_p;
  for (const auto& t : j.at("terms")) {
    MeasureTerm term{t.contains("coeff") ? cyclo_from_json(mu.p, t.at("coeff")) : CycloNum::one(mu.p),
                     t.contains("shift") ? phat_from_json(mu.p, t.at("shift")) : PHat::zero(mu.p), DiracBase{}};
    const json& b = t.at("base");
    const std::string kind = b.at("kind").get<std::string>();
    if (kind == "table") {
      term.base = dual_from_json(mu.p, b);
    } else if (kind == "aq") {
      if (mu.p != 2) throw error("an A_q base needs p = 2");
      term.base = AqBase{b.at("q").get<u64>()};
    } else if (kind != "dirac") {
      throw error("unknown measure base kind '" + kind + "'");
    }
    mu.terms.push_back(std::move(term));
  }
  if (mu.terms.empty()) throw error("a measure needs at least one term");
  return mu;
}

inline json to_json(const WttContinuousReport& r) {
  json j = {{"level", r.level},
            {"zero_set", r.zero_set},
            {"circulant_rank", r.circulant_rank},
            {"circulant_rank_full", r.circulant_rank_full},
            {"inverse_verified", r.inverse_verified},
            {"scope", r.scope}};
  json dft = json::array();
  for (const auto& v : r.dft_values) dft.push_back(to_json(v));
  j["dft_values"] = dft;
  j["inverse_transform"] = r.inverse_transform ? to_json(*r.inverse_transform) : json(nullptr);
  return j;
}

inline json to_json(const CauchyReport& r) {
  json inc = json::array();
  for (const auto& v : r.increment_valuations) inc.push_back(valuation_json(v));
  return {{"increment_valuations", inc}, {"verdict", r.verdict()}};
}

inline json to_json(const MeasureLimit& l) { return {{"topology", l.topology_name()}, {"value", to_json(l.value)}}; }

inline json to_json(const NondensityWitness& w) {
  json combo = json::array();
  for (const auto& [c, t] : w.combo) combo.push_back({{"coeff", to_json(c)}, {"shift", phat_str(t)}});
  return {{"z0", to_json(w.z0)},
          {"combo", combo},
          {"limit", to_json(w.limit)},
          {"f_at_z0", to_json(w.f_at_z0)},
          {"M0", w.m0},
          {"N_star", w.N_star},
          {"anchor_valuation", valuation_json(w.anchor_valuation)},
          {"windowed_max", to_json(w.windowed_max)},
          {"verdict", w.verdict}};
}

inline json to_json(const AttainmentReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"z", to_json(e.z)},
                       {"cauchy", to_json(e.cauchy)},
                       {"limit", e.limit ? to_json(*e.limit) : json(nullptr)},
                       {"attained", e.attained},
                       {"supports_nondensity", e.supports_nondensity}});
  }
  json att = json::array();
  for (const auto& z : r.attaining) att.push_back(to_json(z));
  return {{"c", to_json(r.c)}, {"entries", entries}, {"attaining", att}, {"conclusion", r.conclusion}};
}

}  // namespace pqf::io
