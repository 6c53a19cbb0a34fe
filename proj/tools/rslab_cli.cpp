#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rslab/suites.hpp"

using namespace rslab;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 2;
constexpr int kExitBadInput = 3;

// Command-line overrides, applied after the config file and RS_LAB_SEED.
struct Overrides {
  std::string config;
  std::string mode;
  std::optional<u64> N, pmax, seed, inject;
  std::string output;
};

void add_run_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key=value config file");
  cmd->add_option("--mode", o.mode, "scalar mode: exact or float")->check(CLI::IsMember({"exact", "float"}));
  cmd->add_option("--N", o.N, "truncation N (<= 1000000)");
  cmd->add_option("--pmax", o.pmax, "prime coverage bound (default N)");
  cmd->add_option("--seed", o.seed, "seed for randomized suites");
  cmd->add_option("--output", o.output, "JSON-lines report path");
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg;
  if (!o.config.empty()) load_config_file(o.config, cfg);
  apply_seed_env(cfg);
  if (!o.mode.empty()) cfg.set("mode", o.mode);
  if (o.N) cfg.N = *o.N;
  if (o.pmax) cfg.pmax = *o.pmax;
  if (o.seed) cfg.seed = *o.seed;
  if (o.inject) cfg.inject = *o.inject;
  if (!o.output.empty()) cfg.output = o.output;
  cfg.validate();
  return cfg;
}

struct OutputSink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = nullptr;

  explicit OutputSink(const std::string& path) {
    if (path.empty()) return;
    if (path == "-") {
      stream = &std::cout;
      return;
    }
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw BadInput("cannot open output '" + path + "'");
    stream = file.get();
  }
};

struct Aggregate {
  std::size_t count = 0, passed = 0;
  double max_residual = -1.0;
  std::string anchor;
};

void print_table(std::ostream& os, const std::vector<CheckRecord>& recs,
                 const std::vector<std::pair<std::string, double>>& timings) {
  std::vector<std::string> order;
  std::map<std::string, Aggregate> agg;
  for (const auto& r : recs) {
    const std::string key = r.suite + "." + r.check;
    if (!agg.count(key)) order.push_back(key);
    auto& a = agg[key];
    ++a.count;
    if (r.pass) ++a.passed;
    if (r.residual) a.max_residual = std::max(a.max_residual, *r.residual);
    a.anchor = r.anchor;
  }
  os << std::left << std::setw(26) << "check" << std::right << std::setw(8) << "count" << std::setw(8) << "pass"
     << std::setw(14) << "max_resid" << "  anchor\n";
  for (const auto& key : order) {
    const auto& a = agg[key];
    std::ostringstream res;
    if (a.max_residual >= 0.0)
      res << std::scientific << std::setprecision(2) << a.max_residual;
    else
      res << "exact";
    os << std::left << std::setw(26) << key << std::right << std::setw(8) << a.count << std::setw(8) << a.passed
       << std::setw(14) << res.str() << "  " << a.anchor << '\n';
  }
  for (const auto& [suite, secs] : timings)
    os << "suite " << std::left << std::setw(10) << suite << std::right << std::fixed << std::setprecision(2) << secs
       << " s\n";
}

int cmd_verify(const std::string& suite, const Overrides& o) {
  const RunConfig cfg = resolve(o);
  std::vector<std::string> suites;
  if (suite == "all")
    suites = suite_names();
  else if (std::find(suite_names().begin(), suite_names().end(), suite) != suite_names().end())
    suites = {suite};
  else
    throw BadInput("unknown suite '" + suite + "'");
  if (cfg.inject != 0 && std::find(suites.begin(), suites.end(), "doublesum") == suites.end())
    throw BadInput("--inject applies to the doublesum suite only");
  OutputSink sink(cfg.output);
  Reporter rep(cfg, sink.stream);
  std::vector<std::pair<std::string, double>> timings;
  const bool table_to_stdout = sink.stream != &std::cout;
  std::ostream& human = table_to_stdout ? std::cout : std::cerr;
  for (const auto& s : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run_suite(s, rep);
    } catch (const HardFailure& f) {
      print_table(human, rep.records(), timings);
      const auto& r = f.record();
      std::cerr << "FAIL " << r.suite << "/" << r.check << " [" << r.anchor << "]\n"
                << "  inputs:   " << r.inputs << "\n  expected: " << r.expected << "\n  actual:   " << r.actual << '\n'
                << "  reproduce: rslab verify " << r.suite << " --seed " << cfg.seed << " --mode " << cfg.mode_name()
                << " --N " << cfg.N << (cfg.pmax ? " --pmax " + std::to_string(cfg.pmax) : "")
                << (cfg.inject ? " --inject " + std::to_string(cfg.inject) : "") << '\n';
      return kExitFailure;
    }
    timings.emplace_back(s, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  print_table(human, rep.records(), timings);
  human << "PASS " << rep.records().size() << " checks, seed " << cfg.seed << ", mode " << cfg.mode_name() << '\n';
  return kExitPass;
}

DirichletCharacter character_arg(u64 q, u64 index) {
  if (q == 0) throw BadInput("--q must be positive");
  if (index >= euler_phi(q)) throw BadInput("--chi-index must be below phi(q) = " + std::to_string(euler_phi(q)));
  return DirichletCharacter::from_index(q, index);
}

Rational rational_arg(const std::string& text, const char* what) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw BadInput(std::string(what) + ": " + e.what());
  }
}

std::ostream& open_out(OutputSink& sink) { return sink.stream ? *sink.stream : std::cout; }

int cmd_dump_coeffs(u64 N, const std::string& pi_path, const std::string& tau_path, const std::string& format,
                    const std::string& out) {
  if (N < 1 || N > kMaxTruncation) throw BadInput("N must lie in [1, 1000000]");
  auto load = [&](const std::string& path, const std::vector<Rational>& fallback) {
    if (path.empty()) return constant_rep<Rational>(fallback, N);
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open '" + path + "'");
    return parse_rep<Rational>(in);
  };
  const auto pi = load(pi_path, {1, 2, 3});
  const auto tau = load(tau_path, {1, 2});
  if (pi.degree() != 3 || tau.degree() != 2) throw BadInput("dump coeffs: need degrees (3, 2)");
  if (pi.pmax() < N || tau.pmax() < N) throw BadInput("dump coeffs: representation pmax below N");
  const DoubleSum<Rational> c(pi, tau, N);
  const auto rs = lambda_rs_series(pi, tau, N);
  OutputSink sink(out);
  auto& os = open_out(sink);
  if (format == "csv") os << "n,c_pi_tau,lambda_rs\n";
  for (u64 n = 1; n <= N; ++n) {
    if (format == "csv")
      os << n << ',' << c(n).str() << ',' << rs(n).str() << '\n';
    else
      os << json{{"n", n}, {"c_pi_tau", c(n).str()}, {"lambda_rs", rs(n).str()}}.dump() << '\n';
  }
  return kExitPass;
}

int cmd_dump_twist(u64 N, const std::string& beta_text, int parity, u64 modulus, const std::string& format,
                   const std::string& out) {
  if (N < 1 || N > kMaxTruncation) throw BadInput("N must lie in [1, 1000000]");
  if (parity != 0 && parity != 1) throw BadInput("--parity must be 0 or 1");
  const Rational beta = rational_arg(beta_text, "--beta");
  const auto pi = constant_rep<Rational>({1, 2, 3}, N);
  const auto tw = gl31_twist(pi, beta, parity, N, modulus);
  OutputSink sink(out);
  auto& os = open_out(sink);
  if (format == "csv") os << "n,lambda,re,im\n";
  os << std::setprecision(17);
  for (u64 n = 1; n <= N; ++n) {
    const Complex z = tw.coefficient(n);
    if (format == "csv")
      os << n << ',' << tw.lambda(n).str() << ',' << z.real() << ',' << z.imag() << '\n';
    else
      os << json{{"n", n}, {"lambda", tw.lambda(n).str()}, {"re", z.real()}, {"im", z.imag()}}.dump() << '\n';
  }
  return kExitPass;
}

int cmd_dump_gauss(u64 q, const std::string& format, const std::string& out) {
  if (q == 0) throw BadInput("--q must be positive");
  OutputSink sink(out);
  auto& os = open_out(sink);
  if (format == "csv") os << "chi_index,conductor,q2,r,re,im,in_window,zero\n";
  os << std::setprecision(17);
  for (const auto& chi : char_group(q))
    for (u64 q2 = 1; q2 <= q; ++q2) {
      if (q % q2 != 0) continue;
      for (u64 r = 0; r < q2; ++r) {
        if (std::gcd(r, q2) != 1) continue;
        const Complex g = gauss_beta(chi, Rational(static_cast<long>(r), static_cast<long>(q2)));
        const bool zero = std::abs(g) <= kGaussZeroScreen && gauss_beta_is_zero(chi, r, q2);
        const bool win = in_nonvanishing_window(chi, q2);
        if (format == "csv")
          os << chi.index() << ',' << chi.conductor() << ',' << q2 << ',' << r << ',' << g.real() << ',' << g.imag()
             << ',' << win << ',' << zero << '\n';
        else
          os << json{{"chi_index", chi.index()}, {"conductor", chi.conductor()}, {"q2", q2}, {"r", r},
                     {"re", g.real()}, {"im", g.imag()}, {"in_window", win}, {"zero", zero}}
                    .dump()
             << '\n';
      }
    }
  return kExitPass;
}

int cmd_gauss(u64 q, u64 index, const std::string& beta_text) {
  const auto chi = character_arg(q, index);
  const Rational beta = beta_text.empty() ? Rational(1, static_cast<long>(q)) : rational_arg(beta_text, "--beta");
  const Rational scaled = beta * Rational(static_cast<unsigned long>(q));
  if (scaled.den() != 1) throw BadInput("--beta must lie in q^-1 Z");
  const Complex g = gauss_beta(chi, beta);
  const u64 r = mod_reduce(scaled.num().get_si(), q);
  json j{{"q", q},          {"chi_index", index},         {"conductor", chi.conductor()}, {"parity", chi.parity()},
         {"beta", beta.str()}, {"re", g.real()},            {"im", g.imag()},               {"abs2", std::norm(g)},
         {"zero", std::abs(g) <= kGaussZeroScreen && gauss_beta_is_zero(chi, r, q)}};
  std::cout << j.dump() << '\n';
  return kExitPass;
}

int cmd_twist(u64 q, u64 index, u64 N, const std::string& mode, u64 seed) {
  const auto chi = character_arg(q, index);
  if (!chi.is_primitive()) throw BadInput("twist: character must be primitive");
  if (N < 1 || N > kMaxTruncation) throw BadInput("N must lie in [1, 1000000]");
  Rng rng(seed);
  const auto pi = random_unramified_rep<Rational>(rng, 3, N);
  const auto out = gl31_decomposition_check(pi, chi, chi.parity(), N, mode == "exact");
  json j{{"q", q}, {"chi_index", index}, {"N", N}, {"mode", mode}, {"seed", seed}, {"ok", out.ok}};
  if (!out.exact) j["max_residual"] = out.max_residual;
  if (out.first_failure) j["first_failure"] = *out.first_failure;
  std::cout << j.dump() << '\n';
  return out.ok ? kExitPass : kExitFailure;
}

int cmd_reduce(const std::string& matrix, u64 p, u64 qprime, u64 pprime) {
  Mat2 M;
  try {
    M = Mat2::parse(matrix);
  } catch (const std::exception& e) {
    throw BadInput(std::string("--matrix: ") + e.what());
  }
  CosetContext ctx;
  try {
    ctx = CosetContext(p, qprime, pprime);
  } catch (const std::invalid_argument& e) {
    throw BadInput(e.what());
  }
  if (M.det().sign() == 0) throw BadInput("--matrix must be invertible");
  const auto c = clgp_reduce(M, ctx);
  const auto chk = check_canonical(M, c, ctx);
  json j{{"matrix", M.str()},          {"p", p},
         {"qprime", qprime},           {"pprime", pprime},
         {"gamma1", c.gamma1.str()},   {"gamma2", c.gamma2.str()},
         {"u", c.u.str()},             {"g", c.g.str()},
         {"epsilon", c.epsilon},       {"canonical", c.canonical(ctx).str()},
         {"verified", chk.ok},         {"support", supp_support(c.gamma1, c.gamma2, ctx)}};
  std::cout << j.dump() << '\n';
  return chk.ok ? kExitPass : kExitFailure;
}

int cmd_funceq(u64 q, u64 index, const std::string& points) {
  const auto chi = character_arg(q, index);
  if (!chi.is_primitive()) throw BadInput("funceq: character must be primitive");
  std::vector<double> ts;
  std::stringstream ss(points);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      std::size_t used = 0;
      ts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw BadInput("--points: bad value '" + tok + "'");
    }
  }
  if (ts.empty()) throw BadInput("--points is empty");
  for (double t : ts)
    if (std::abs(t) > 30.0) throw BadInput("--points: |t| must not exceed 30");
  const auto rep = dirichlet_fe_check(chi, critical_line_points(ts));
  json samples = json::array();
  for (const auto& s : rep.samples) {
    json e{{"t", s.s.imag()}, {"skipped", s.skipped}};
    if (s.skipped)
      e["reason"] = s.reason;
    else
      e["residual"] = s.residual;
    samples.push_back(e);
  }
  const bool ok = rep.skipped == 0 && rep.max_residual < 1e-8;
  json j{{"q", q},
         {"chi_index", index},
         {"parity", chi.parity()},
         {"epsilon", {{"re", rep.epsilon.real()}, {"im", rep.epsilon.imag()}}},
         {"max_residual", rep.max_residual},
         {"tolerance", 1e-8},
         {"ok", ok},
         {"samples", samples}};
  std::cout << j.dump() << '\n';
  return ok ? kExitPass : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rankin-Selberg coefficient and identity verification"};
  app.require_subcommand(1);

  Overrides vo;
  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "cauchy|doublesum|aux|gauss|addtomult|clgp|matid|funceq|all")->required();
  add_run_options(verify, vo);
  verify->add_option("--inject", vo.inject, "doublesum: corrupt c(n) at this n");

  std::string kind, pi_path, tau_path, format = "csv", out, beta_text = "1/3";
  u64 dN = 100, dq = 12, dmod = 0;
  int dparity = 0;
  auto* dump = app.add_subcommand("dump", "write coefficient, twist or Gauss-sum tables");
  dump->add_option("kind", kind, "coeffs|twist|gauss")->required()->check(CLI::IsMember({"coeffs", "twist", "gauss"}));
  dump->add_option("--N", dN, "number of rows for coeffs/twist");
  dump->add_option("--q", dq, "modulus for gauss");
  dump->add_option("--beta", beta_text, "additive shift for twist");
  dump->add_option("--parity", dparity, "parity for twist");
  dump->add_option("--modulus", dmod, "unit-average modulus for twist (default: denominator of beta)");
  dump->add_option("--pi", pi_path, "degree-3 representation file for coeffs");
  dump->add_option("--tau", tau_path, "degree-2 representation file for coeffs");
  dump->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  dump->add_option("--out", out, "output path (default stdout)");

  u64 gq = 3, gidx = 1;
  std::string gbeta;
  auto* gauss = app.add_subcommand("gauss", "evaluate tau_q(chi, beta)");
  gauss->add_option("--q", gq, "modulus")->required();
  gauss->add_option("--chi-index", gidx, "character index in [0, phi(q))")->required();
  gauss->add_option("--beta", gbeta, "shift in q^-1 Z (default 1/q)");

  u64 tq = 5, tidx = 1, tN = 200, tseed = 20240917;
  std::string tmode = "float";
  auto* twist = app.add_subcommand("twist", "check the GL(3) x GL(1) decomposition for one character");
  twist->add_option("--q", tq, "modulus")->required();
  twist->add_option("--chi-index", tidx, "primitive character index")->required();
  twist->add_option("--N", tN, "truncation");
  twist->add_option("--mode", tmode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  twist->add_option("--seed", tseed, "seed for the random degree-3 parameters");

  std::string matrix;
  u64 rp = 5, rq = 1, rpp = 3;
  auto* reduce = app.add_subcommand("reduce", "canonical double-coset representative of a 2x2 matrix");
  reduce->add_option("--matrix", matrix, "rows separated by ';', entries by ','")->required();
  reduce->add_option("--p", rp, "designated prime p");
  reduce->add_option("--qprime", rq, "auxiliary modulus q'");
  reduce->add_option("--pprime", rpp, "auxiliary prime p'");

  u64 fq = 5, fidx = 1;
  std::string fpoints = "0,1,2";
  auto* funceq = app.add_subcommand("funceq", "functional-equation residuals of a completed Dirichlet L-function");
  funceq->add_option("--q", fq, "modulus")->required();
  funceq->add_option("--chi-index", fidx, "primitive character index")->required();
  funceq->add_option("--points", fpoints, "comma-separated t values for s = 1/2 + i t");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (*verify) return cmd_verify(suite, vo);
    if (*dump) {
      if (kind == "coeffs") return cmd_dump_coeffs(dN, pi_path, tau_path, format, out);
      if (kind == "twist") return cmd_dump_twist(dN, beta_text, dparity, dmod, format, out);
      return cmd_dump_gauss(dq, format, out);
    }
    if (*gauss) return cmd_gauss(gq, gidx, gbeta);
    if (*twist) return cmd_twist(tq, tidx, tN, tmode, tseed);
    if (*reduce) return cmd_reduce(matrix, rp, rq, rpp);
    if (*funceq) return cmd_funceq(fq, fidx, fpoints);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitBadInput;
}
