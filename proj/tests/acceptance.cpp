// Acceptance driver: one PASS/FAIL line per criterion. Counts are recomputed here, independently of the
// suites, so a suite that silently skips cases fails its criterion.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rslab/suites.hpp"

namespace {

using rslab::CheckRecord;
using rslab::RunConfig;
using rslab::u64;

// Pinned tolerances and budgets.
constexpr double kCauchyFloatTol = 1e-9;
constexpr double kGaussModulusTol = 1e-9;
constexpr double kAddToMultTol = 1e-10;
constexpr double kGl31Tol = 1e-10;
constexpr double kFeTol = 1e-8;
constexpr double kEpsModulusTol = 1e-9;
constexpr double kDoublesumBudgetSeconds = 60.0;
constexpr double kVerifyAllBudgetSeconds = 300.0;

struct SuiteRun {
  std::vector<CheckRecord> records;
  std::string failure;  // empty when every check passed
  double seconds = 0.0;
};

SuiteRun run(const std::string& suite, RunConfig::Mode mode, u64 N = 5000) {
  RunConfig cfg;
  cfg.mode = mode;
  cfg.N = N;
  rslab::Reporter rep(cfg, nullptr);
  SuiteRun out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    rslab::run_suite(suite, rep);
  } catch (const rslab::HardFailure& f) {
    out.failure = f.record().suite + "." + f.record().check + " " + f.record().inputs + ": expected " + f.record().expected +
                  ", got " + f.record().actual;
  } catch (const std::exception& e) {
    out.failure = std::string("exception: ") + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.records = rep.records();
  return out;
}

// Evaluates one check kind: exact count, all passing, residuals within tol, optional input predicate.
struct KindResult {
  bool ok = true;
  std::string why;
};

KindResult expect_kind(const SuiteRun& r, const std::string& kind, std::size_t count, double tol = -1.0,
                       const std::function<bool(const CheckRecord&)>& pred = {}) {
  std::size_t seen = 0;
  for (const auto& rec : r.records) {
    if (rec.check != kind) continue;
    ++seen;
    if (!rec.pass) return {false, kind + " failed at " + rec.inputs};
    if (tol >= 0.0 && rec.residual && !(*rec.residual <= tol))
      return {false, kind + " residual " + std::to_string(*rec.residual) + " at " + rec.inputs};
    if (pred && !pred(rec)) return {false, kind + " condition violated at " + rec.inputs + " (" + rec.actual + ")"};
  }
  if (seen != count) return {false, kind + ": " + std::to_string(seen) + " checks, expected " + std::to_string(count)};
  return {};
}

double max_residual(const SuiteRun& r, const std::string& kind) {
  double m = 0.0;
  for (const auto& rec : r.records)
    if (rec.check == kind && rec.residual) m = std::max(m, *rec.residual);
  return m;
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

// Number of primitive characters mod q: sum over d | q of mu(d) phi(q/d), by trial division.
u64 primitive_count(u64 q) {
  auto phi = [](u64 n) {
    u64 r = n;
    for (u64 p = 2; p * p <= n; ++p)
      if (n % p == 0) {
        while (n % p == 0) n /= p;
        r -= r / p;
      }
    if (n > 1) r -= r / n;
    return r;
  };
  auto mu = [](u64 n) {
    int s = 1;
    for (u64 p = 2; p * p <= n; ++p)
      if (n % p == 0) {
        n /= p;
        if (n % p == 0) return 0;
        s = -s;
      }
    if (n > 1) s = -s;
    return s;
  };
  long long total = 0;
  for (u64 d = 1; d <= q; ++d)
    if (q % d == 0) total += mu(d) * static_cast<long long>(phi(q / d));
  return static_cast<u64>(total);
}

std::size_t moduli_with_primitive(u64 lo, u64 hi) {
  std::size_t n = 0;
  for (u64 q = lo; q <= hi; ++q) n += primitive_count(q) > 0;
  return n;
}

u64 primitive_total(std::initializer_list<u64> qs) {
  u64 t = 0;
  for (u64 q : qs) t += primitive_count(q);
  return t;
}

u64 primitive_total_upto(u64 hi) {
  u64 t = 0;
  for (u64 q = 1; q <= hi; ++q) t += primitive_count(q);
  return t;
}

// Partitions with at most three parts and largest part at most 6.
std::size_t shapes_l1_le6() {
  std::size_t n = 0;
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= a; ++b)
      for (int c = 0; c <= b; ++c) ++n;
  return n;
}

int failures = 0;

void report(int id, const std::string& title, std::vector<KindResult> parts, const std::string& detail) {
  std::string why;
  bool ok = true;
  for (const auto& p : parts)
    if (!p.ok) {
      ok = false;
      why += (why.empty() ? "" : "; ") + p.why;
    }
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << "  " << title << "  [" << (ok ? detail : why) << "]"
            << std::endl;
}

KindResult suite_ok(const SuiteRun& r) { return r.failure.empty() ? KindResult{} : KindResult{false, r.failure}; }

struct CliRun {
  int status = -1;
  double seconds = 0.0;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(RSLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const auto t0 = std::chrono::steady_clock::now();
  const int st = std::system(cmd.c_str());
  CliRun r;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.status = (st != -1 && WIFEXITED(st)) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(2);
  os << std::scientific << x;
  return os.str();
}

}  // namespace

int main() {
  using Mode = RunConfig::Mode;

  {
    const auto r = run("doublesum", Mode::Exact, 5000);
    const bool in_budget = r.seconds <= kDoublesumBudgetSeconds;
    report(1, "double-sum coefficients equal Rankin-Selberg coefficients, exact, 20 sets, n <= 5000",
           {suite_ok(r), expect_kind(r, "anchor", 1),
            expect_kind(r, "identity", 20, 0.0, [](const CheckRecord& c) { return contains(c.inputs, "N=5000"); }),
            in_budget ? KindResult{} : KindResult{false, "runtime " + std::to_string(r.seconds) + " s"}},
           "anchor 197, runtime " + fmt(r.seconds) + " s");
  }

  const auto cauchy_exact = run("cauchy", Mode::Exact);
  {
    const auto fl = run("cauchy", Mode::Float);
    report(2, "Cauchy identity and two-row specialization to degree 12",
           {suite_ok(cauchy_exact), suite_ok(fl), expect_kind(cauchy_exact, "identity", 10, 0.0),
            expect_kind(cauchy_exact, "two_row", 10, 0.0), expect_kind(fl, "identity", 10, kCauchyFloatTol),
            expect_kind(fl, "two_row", 10, kCauchyFloatTol)},
           "exact zero; float max " + fmt(std::max(max_residual(fl, "identity"), max_residual(fl, "two_row"))));
  }

  report(3, "bialternant equals tableau enumeration for lambda_1 <= 6, 50 points each",
         {suite_ok(cauchy_exact),
          expect_kind(cauchy_exact, "schur", shapes_l1_le6(), -1.0,
                      [](const CheckRecord& c) { return contains(c.inputs, "points=50"); })},
         std::to_string(shapes_l1_le6()) + " shapes");

  {
    const auto r = run("aux", Mode::Exact);
    report(4, "exact quotient on the b, m <= 4 grid with Steinberg anchor and degenerate check",
           {suite_ok(r), expect_kind(r, "steinberg", 1), expect_kind(r, "quotient", 4 * 4 * 2 * 2),
            expect_kind(r, "degenerate", 4 * 4 * 2 * 2)},
           "64 grid points");
  }

  const auto addmult = run("addtomult", Mode::Exact, 1000);
  {
    const auto g = run("gauss", Mode::Exact);
    report(5, "Gauss sum modulus, nonvanishing window, additive-to-multiplicative identity",
           {suite_ok(g), suite_ok(addmult), expect_kind(g, "modulus", moduli_with_primitive(1, 100), kGaussModulusTol),
            expect_kind(g, "window", 60), expect_kind(addmult, "identity", moduli_with_primitive(1, 40), kAddToMultTol)},
           "modulus max " + fmt(max_residual(g, "modulus")) + ", identity max " + fmt(max_residual(addmult, "identity")));
  }

  {
    const auto r = run("doublesum", Mode::Exact, 2000);
    report(6, "lambda(1, n) = lambda(n) for n <= 2000 on 10 sets",
           {suite_ok(r), expect_kind(r, "standardcoeff", 10, -1.0,
                                     [](const CheckRecord& c) { return contains(c.inputs, "N=2000"); })},
           "exact");
  }

  {
    const auto r = run("clgp", Mode::Exact);
    report(7, "canonical reduction of 500 matrices with 5 double-coset perturbations each",
           {suite_ok(r), expect_kind(r, "anchor", 1), expect_kind(r, "reduce", 500), expect_kind(r, "invariance", 2500)},
           "content oracle agrees");
  }

  {
    const auto r = run("matid", Mode::Exact);
    const bool anchor = !r.records.empty() && std::any_of(r.records.begin(), r.records.end(), [](const CheckRecord& c) {
      return c.check == "main2" && c.inputs.rfind("n=1 q=3 ", 0) == 0;
    });
    report(8, "support decomposition, 3x3 matrix identity, determinant bookkeeping",
           {suite_ok(r), expect_kind(r, "supp", 100), expect_kind(r, "main2", 100), expect_kind(r, "det", 100),
            anchor ? KindResult{} : KindResult{false, "q=3 anchor instance missing"}},
           "100 instances each");
  }

  report(9, "GL(3) x GL(1) decomposition for every primitive character q <= 20, n <= 1000",
         {suite_ok(addmult), expect_kind(addmult, "gl31", primitive_total_upto(20), kGl31Tol, [](const CheckRecord& c) {
            return contains(c.inputs, "N=1000") && contains(c.actual, "exact certified");
          })},
         std::to_string(primitive_total_upto(20)) + " characters, float max " + fmt(max_residual(addmult, "gl31")) +
             ", exact certified");

  {
    const auto r = run("funceq", Mode::Float);
    const u64 nchars = primitive_total({3, 4, 5, 7});
    report(10, "completed Dirichlet and synthetic product functional equations, unit epsilon",
           {suite_ok(r), expect_kind(r, "dirichlet", nchars, kFeTol),
            expect_kind(r, "synthetic", nchars, kFeTol,
                        [](const CheckRecord& c) {
                          const auto q = std::stoull(c.inputs.substr(c.inputs.find("q=") + 2));
                          return contains(c.actual, "conductor " + std::to_string(q * q * q));
                        }),
            expect_kind(r, "epsdef", 100, kEpsModulusTol)},
           "FE max " + fmt(std::max(max_residual(r, "dirichlet"), max_residual(r, "synthetic"))) + ", |eps| dev max " +
               fmt(max_residual(r, "epsdef")));
  }

  {
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "rslab_acceptance_a.jsonl", b = dir / "rslab_acceptance_b.jsonl";
    const auto r1 = run_cli("verify all --output " + a.string());
    const auto r2 = run_cli("verify all --output " + b.string());
    const std::string sa = slurp(a), sb = slurp(b);
    std::vector<KindResult> parts;
    if (r1.status != 0 || r2.status != 0)
      parts.push_back({false, "exit status " + std::to_string(r1.status) + "/" + std::to_string(r2.status)});
    if (std::max(r1.seconds, r2.seconds) > kVerifyAllBudgetSeconds)
      parts.push_back({false, "runtime " + std::to_string(std::max(r1.seconds, r2.seconds)) + " s"});
    if (sa.empty() || sa != sb) parts.push_back({false, "reports differ between runs"});
    report(11, "verify all within budget, deterministic under fixed seed", parts,
           "runtime " + fmt(r1.seconds) + " s / " + fmt(r2.seconds) + " s, " + std::to_string(std::count(sa.begin(), sa.end(), '\n')) +
               " identical report lines");
    std::filesystem::remove(a);
    std::filesystem::remove(b);
  }

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
