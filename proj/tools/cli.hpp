#pragma once

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pqf/pqf.hpp"
#include "pqf/sampling.hpp"

namespace pqf::cli {

using nlohmann::json;

/// Input problems (bad flags, malformed or ill-typed JSON): exit code 2.
class input_error : public error {
 public:
  using error::error;
};

/// A verification that ran and failed: exit code 1.
class check_failed : public error {
 public:
  check_failed(const std::string& what, json counterexample) : error(what), counterexample_(std::move(counterexample)) {}
  const json& counterexample() const { return counterexample_; }

 private:
  json counterexample_;
};

struct Options {
  u64 p = 2;
  u64 q = 5;
  int precision = 64;
  unsigned level = 3;
  bool header = true;
  std::string input = "-";
};

inline std::string read_all(const std::string& path, std::istream& in) {
  std::ostringstream ss;
  if (path == "-") {
    ss << in.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw input_error("cannot open '" + path + "'");
    ss << f.rdbuf();
  }
  return ss.str();
}

/// Parses JSON, reporting syntax errors with line and column.
inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    auto pos = msg.find("syntax error");
    throw input_error("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      (pos == std::string::npos ? msg : msg.substr(pos)));
  }
}

/// Runs a JSON decoder, turning type and key errors into input errors.
template <class F>
auto decode(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw input_error(std::string("invalid input: ") + e.what());
  } catch (const precision_exhausted&) {
    throw;
  } catch (const error& e) {
    throw input_error(std::string("invalid input: ") + e.what());
  }
}

struct Session {
  Config cfg;
  FieldCtxPtr ctx;
};

inline Session make_session(const Options& o) {
  Config cfg;
  try {
    cfg = Config::make(o.p, o.q, o.precision, std::max(1u, o.level));
  } catch (const config_error& e) {
    throw input_error(e.what());
  }
  return {cfg, field_setup(cfg, o.level)};
}

/// Runs fn on sessions of increasing level until the field holds every value
/// fn needs; all valuations of one run share a single embedding.
template <class F>
auto with_growing_field(Options o, F fn) {
  for (;; ++o.level) {
    try {
      return fn(make_session(o));
    } catch (const field_too_small&) {
      if (o.level >= 24) throw;
    }
  }
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

// ---------------------------------------------------------------- commands

inline int cmd_field_info(const Options& o, std::ostream& out) {
  Session s = make_session(o);
  const FieldCtx& c = *s.ctx;
  json minpoly = json::array();
  for (const auto& a : c.minpoly) minpoly.push_back(a.get_str());
  const zmod::Poly phi = detail::cyclotomic_poly(c.p, c.N);
  const bool divides = zmod::mod_monic(phi, c.minpoly, c.modulus()).empty();
  const bool irreducible = fq::is_irreducible(zmod::reduce_to_fq(c.minpoly, c.q), c.q);
  const bool order_ok = c.f == mult_order(c.q % ipow(c.p, c.N) == 0 ? 1 : c.q, ipow(c.p, c.N));
  emit(out, {{"p", c.p},
             {"q", c.q},
             {"N", c.N},
             {"M", c.M},
             {"f", c.f},
             {"residue_modulus", c.residue_modulus},
             {"zeta_residue", c.zeta_residue},
             {"minpoly_mod_q", zmod::reduce_to_fq(c.minpoly, c.q)},
             {"minpoly", minpoly},
             {"checks", {{"minpoly_divides_cyclotomic", divides}, {"minpoly_irreducible_mod_q", irreducible}, {"f_is_order_of_q", order_ok}}}});
  return divides && irreducible && order_ok ? 0 : 1;
}

inline int cmd_transform(const Options& o, std::istream& in, std::ostream& out) {
  make_session(o);
  json j = parse_json(read_all(o.input, in));
  ExactFn f = decode([&] { return io::lcfn_from_json(o.p, j); });
  emit(out, io::to_json(fourier_fwd(f)));
  return 0;
}

inline int cmd_inverse(const Options& o, std::istream& in, std::ostream& out) {
  make_session(o);
  json j = parse_json(read_all(o.input, in));
  ExactDual F = decode([&] { return io::dual_from_json(o.p, j); });
  emit(out, io::to_json(fourier_inv(F)));
  return 0;
}

inline int cmd_convolve(const Options& o, const std::string& domain, std::istream& in, std::ostream& out) {
  make_session(o);
  json j = parse_json(read_all(o.input, in));
  if (domain == "zp") {
    auto [f, g] = decode([&] { return std::pair{io::lcfn_from_json(o.p, j.at("a")), io::lcfn_from_json(o.p, j.at("b"))}; });
    emit(out, io::to_json(conv_zp(f, g)));
  } else {
    auto [F, G] = decode([&] { return std::pair{io::dual_from_json(o.p, j.at("a")), io::dual_from_json(o.p, j.at("b"))}; });
    emit(out, io::to_json(conv_dual(F, G)));
  }
  return 0;
}

// Identity suites on seeded random inputs.

inline std::vector<std::string> suite_fourier(const Session& s, unsigned level, unsigned count, u64 seed) {
  sampling::Rng rng(seed);
  const u64 p = s.cfg.p;
  for (unsigned i = 0; i < count; ++i) {
    const auto N = static_cast<unsigned>(sampling::uniform(rng, 0, level));
    ExactFn f = sampling::random_fn(rng, p, N, N);
    ExactFn g = sampling::random_fn(rng, p, static_cast<unsigned>(sampling::uniform(rng, 0, level)), N);
    auto fail = [&](const std::string& what) { throw check_failed(what, {{"f", io::to_json(f)}, {"g", io::to_json(g)}}); };
    ExactDual F = fourier_fwd(f), G = fourier_fwd(g);
    if (!fn_equal(fourier_inv(F), f)) fail("round-trip failed");
    if (!dual_equal(fourier_fwd(mul_fn(f, g)), conv_dual(F, G))) fail("F(f g) != F(f) * F(g)");
    if (!dual_equal(fourier_fwd(conv_zp(f, g)), mul_dual(F, G))) fail("F(f * g) != F(f) F(g)");
    if (!(parseval(f, g) == haar_integral(mul_fn(f, g)))) fail("Parseval identity failed");
    if (!(norm_fn(f, s.ctx) == norm_dual_sup(F, s.ctx))) fail("isometry failed");
  }
  return {"round-trip OK", "homomorphism OK", "parseval OK", "isometry OK"};
}

inline std::vector<std::string> suite_aq(const Session& s, unsigned level, unsigned, u64) {
  if (s.cfg.p != 2) throw input_error("the aq suite needs --p 2");
  const MeasureHat mu = measure_aq(s.cfg.q);
  for (unsigned N = 0; N <= level; ++N) {
    for (u64 z = 0; z < ipow(2, N); ++z) {
      ZpPoint zp = ZpPoint::nat(2, z);
      auto lit = mu_tilde(mu, zp, N).as_rational();
      if (!lit || *lit != aq_partial_closed(s.cfg.q, zp, N))
        throw check_failed("partial-sum identity failed", {{"z", z}, {"N", N}});
    }
  }
  return {"partial-sum identity OK"};
}

inline std::vector<std::string> suite_wtt(const Session& s, unsigned level, unsigned count, u64 seed) {
  sampling::Rng rng(seed);
  const u64 p = s.cfg.p;
  for (unsigned i = 0; i < count; ++i) {
    const auto N = static_cast<unsigned>(sampling::uniform(rng, 0, std::min(level, 2u)));
    ExactFn chi = sampling::random_fn(rng, p, N, 0);
    WttContinuousReport r = wtt_continuous_check(chi);
    if (!r.consistent()) throw check_failed("four-way agreement failed", io::to_json(chi));
  }
  return {"four-way agreement OK"};
}

inline int cmd_verify(const Options& o, const std::string& suite, unsigned count, u64 seed, std::ostream& out) {
  Session s = make_session(o);
  std::vector<std::string> lines;
  auto run = [&](const std::string& name, auto fn) {
    if (suite == name || suite == "all")
      for (auto& l : fn(s, o.level, count, seed)) lines.push_back(l);
  };
  run("fourier", suite_fourier);
  if (suite == "aq" || o.p == 2) run("aq", suite_aq);
  run("wtt", suite_wtt);
  if (lines.empty()) throw input_error("unknown suite '" + suite + "' (fourier, aq, wtt, all)");
  for (std::size_t i = 0; i < lines.size(); ++i) out << (i ? ", " : "") << lines[i];
  out << "\n";
  return 0;
}

inline int cmd_aq(const Options& o, const std::string& zs, unsigned N_max, const std::string& emit_kind, bool literal,
                  std::ostream& out) {
  Options o2 = o;
  o2.p = 2;
  o2.level = std::max(1u, literal ? N_max + 1 : 1u);
  Session s = make_session(o2);
  const ZpPoint z = decode([&] { return ZpPoint::parse(2, zs); });
  const MeasureHat mu = measure_aq(o.q);
  auto value = [&](unsigned N) -> mpq_class {
    if (!literal) return aq_partial_closed(o.q, z, N);
    auto r = mu_tilde(mu, z, N).as_rational();
    if (!r) throw check_failed("literal partial sum is not rational", {{"N", N}});
    return *r;
  };
  json rows = json::array();
  mpq_class cur = value(0);
  std::ostringstream csv;
  csv << "z,N,value_num,value_den,increment_valuation\n";
  for (unsigned N = 0; N < N_max; ++N) {
    mpq_class next = value(N + 1);
    mpq_class inc = next - cur;
    std::optional<int> v;
    if (inc != 0) v = valuation(inc, o.q);
    const std::string vs = v ? std::to_string(*v) : "inf";
    csv << z.to_string() << "," << N << "," << cur.get_num().get_str() << "," << cur.get_den().get_str() << "," << vs << "\n";
    rows.push_back({{"N", N}, {"value", cur.get_str()}, {"increment_valuation", io::valuation_json(v)}});
    cur = std::move(next);
  }
  if (emit_kind == "csv") {
    out << csv.str();
  } else {
    AqTilde lim = aq_tilde(o.q, z);
    emit(out, {{"q", o.q},
               {"z", io::to_json(z)},
               {"method", literal ? "literal" : "closed"},
               {"rows", rows},
               {"limit", {{"topology", lim.topology_name()}, {"value", lim.value.get_str()}}}});
  }
  return 0;
}

inline int cmd_wtt_check(const Options& o, std::istream& in, std::ostream& out) {
  make_session(o);
  json j = parse_json(read_all(o.input, in));
  ExactFn chi = decode([&] { return io::lcfn_from_json(o.p, j); });
  WttContinuousReport r = wtt_continuous_check(chi);
  emit(out, io::to_json(r));
  if (!r.consistent()) throw check_failed("finite-level equivalences disagree", io::to_json(chi));
  return 0;
}

inline std::vector<std::pair<CycloNum, PHat>> combo_from_json(u64 p, const json& j) {
  std::vector<std::pair<CycloNum, PHat>> combo;
  for (const auto& e : j) combo.emplace_back(io::cyclo_from_json(p, e.at("coeff")), io::phat_from_json(p, e.at("shift")));
  return combo;
}

inline int cmd_witness(const Options& o, const std::string& z0s, std::istream& in, std::ostream& out) {
  Options o2 = o;
  json j = parse_json(read_all(o.input, in));
  MeasureHat mu = decode([&] { return io::measure_from_json(j.at("measure"), o.p); });
  o2.p = mu.p;
  make_session(o2);
  ZpPoint z0 = decode([&] {
    if (!z0s.empty()) return ZpPoint::parse(mu.p, z0s);
    return io::zp_from_json(mu.p, j.at("z0"));
  });
  auto combo = decode([&] {
    return j.contains("combo") ? combo_from_json(mu.p, j.at("combo"))
                               : std::vector<std::pair<CycloNum, PHat>>{{CycloNum::one(mu.p), PHat::zero(mu.p)}};
  });
  NondensityWitness w = with_growing_field(o2, [&](const Session& s) { return nondensity_witness(mu, z0, combo, s.ctx); });
  emit(out, io::to_json(w));
  if (!w.verdict) throw check_failed("witness window norm below 1", io::to_json(w));
  return 0;
}

inline int cmd_scan(const Options& o, const std::string& emit_kind, std::istream& in, std::ostream& out) {
  json j = parse_json(read_all(o.input, in));
  MeasureHat mu = decode([&] { return io::measure_from_json(j.at("measure"), o.p); });
  Options o2 = o;
  o2.p = mu.p;
  const auto N_max = decode([&] { return j.value("N_max", 16u); });
  o2.level = std::max(o.level, 1u);
  make_session(o2);
  CycloNum c = decode([&] { return io::cyclo_from_json(mu.p, j.at("c")); });
  std::vector<ZpPoint> cands = decode([&] {
    std::vector<ZpPoint> v;
    for (const auto& z : j.at("candidates")) v.push_back(io::zp_from_json(mu.p, z));
    return v;
  });
  AttainmentReport r =
      with_growing_field(o2, [&](const Session& s) { return value_attainment_scan(mu, c, cands, N_max, s.ctx); });
  if (emit_kind == "csv") {
    out << "z,attained,topology,limit,verdict\n";
    for (const auto& e : r.entries) {
      out << e.z.to_string() << "," << (e.attained ? "true" : "false") << ","
          << (e.limit ? e.limit->topology_name() : "none") << ",\"" << (e.limit ? e.limit->value.to_string() : "")
          << "\"," << e.cauchy.verdict() << "\n";
    }
    out << "# " << r.conclusion << "\n";
  } else {
    emit(out, io::to_json(r));
  }
  return 0;
}

// ---------------------------------------------------------------- driver

/// Runs one CLI invocation; returns the process exit code.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact (p,q)-adic Fourier analysis on Z_p", "pqfourier"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--p", o.p, "prime p")->capture_default_str();
  app.add_option("--q", o.q, "prime q != p")->capture_default_str();
  app.add_option("--precision", o.precision, "q-adic precision M")->capture_default_str();
  app.add_option("--level", o.level, "conductor exponent N of the session field")->capture_default_str();
  bool no_header = false;
  app.add_flag("--no-header", no_header, "omit the version header line");

  auto add_input = [&](CLI::App* sub) { sub->add_option("input", o.input, "input JSON file, '-' for stdin")->capture_default_str(); };

  auto* field_info = app.add_subcommand("field-info", "describe the fixed embedding of Q(zeta_{p^N})");
  auto* transform = app.add_subcommand("transform", "Fourier transform of a locally constant function");
  add_input(transform);
  auto* inverse = app.add_subcommand("inverse", "inverse transform of a finitely supported dual function");
  add_input(inverse);
  auto* convolve = app.add_subcommand("convolve", "convolution of {\"a\":..,\"b\":..}");
  std::string domain = "zp";
  convolve->add_option("--domain", domain, "zp or dual")->check(CLI::IsMember({"zp", "dual"}))->capture_default_str();
  add_input(convolve);
  auto* verify = app.add_subcommand("verify", "run an identity suite");
  std::string suite = "all";
  unsigned count = 20;
  u64 seed = 1;
  verify->add_option("--suite", suite, "fourier, aq, wtt or all")->capture_default_str();
  verify->add_option("--count", count, "random instances")->capture_default_str();
  verify->add_option("--seed", seed, "random seed")->capture_default_str();
  auto* aq = app.add_subcommand("aq", "partial sums of the A_q example (p = 2)");
  std::string zs = "-1";
  unsigned N_max = 8;
  std::string emit_kind = "csv";
  bool literal = false;
  aq->add_option("--z", zs, "point of Z_2: integer or pre:period")->capture_default_str();
  aq->add_option("--N", N_max, "number of rows")->capture_default_str();
  aq->add_option("--emit", emit_kind, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  aq->add_flag("--literal", literal, "sum over the ball instead of using the closed form");
  auto* wtt_check = app.add_subcommand("wtt-check", "finite-level continuous Tauberian check");
  add_input(wtt_check);
  auto* witness = app.add_subcommand("witness", "non-density witness for {\"measure\",\"z0\",\"combo\"}");
  std::string z0s;
  witness->add_option("--z0", z0s, "point z0 (overrides the input)");
  add_input(witness);
  auto* scan = app.add_subcommand("scan", "value-attainment scan for {\"measure\",\"c\",\"candidates\",\"N_max\"}");
  std::string scan_emit = "json";
  scan->add_option("--emit", scan_emit, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  add_input(scan);

  std::vector<const char*> argv{"pqfourier"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  o.header = !no_header;

  CLI::App* sub = app.get_subcommands().front();
  std::ostringstream body;
  int code = 0;
  try {
    if (sub == field_info)
      code = cmd_field_info(o, body);
    else if (sub == transform)
      code = cmd_transform(o, in, body);
    else if (sub == inverse)
      code = cmd_inverse(o, in, body);
    else if (sub == convolve)
      code = cmd_convolve(o, domain, in, body);
    else if (sub == verify)
      code = cmd_verify(o, suite, count, seed, body);
    else if (sub == aq)
      code = cmd_aq(o, zs, N_max, emit_kind, literal, body);
    else if (sub == wtt_check)
      code = cmd_wtt_check(o, in, body);
    else if (sub == witness)
      code = cmd_witness(o, z0s, in, body);
    else if (sub == scan)
      code = cmd_scan(o, scan_emit, in, body);
  } catch (const input_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const check_failed& e) {
    if (o.header) out << "# pqfourier " << version << " " << sub->get_name() << "\n";
    out << body.str();
    err << "check failed: " << e.what() << "\n" << e.counterexample().dump() << "\n";
    return 1;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (o.header) out << "# pqfourier " << version << " " << sub->get_name() << "\n";
  out << body.str();
  return code;
}

}  // namespace pqf::cli
