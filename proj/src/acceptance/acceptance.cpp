#include "exsplit/acceptance.hpp"

#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "exsplit/errors.hpp"
#include "exsplit/modular.hpp"

namespace exsplit::acceptance {

namespace fs = std::filesystem;
using Rng = std::mt19937_64;

namespace {

// Counts checks and keeps the first failure.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++count_;
    if (!ok && first_failure_.empty()) first_failure_ = what;
  }
  bool passed() const { return first_failure_.empty(); }
  std::string detail() const {
    if (passed()) return std::to_string(count_) + " checks";
    return "first failure: " + first_failure_;
  }

 private:
  std::size_t count_ = 0;
  std::string first_failure_;
};

std::string ps(u64 p, unsigned n) { return "p=" + std::to_string(p) + " n=" + std::to_string(n); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ResidueElement random_residue(const FieldPtr& F, Rng& rng) {
  std::vector<u64> c(F->degree());
  for (auto& v : c) v = rng() % F->characteristic();
  return F->from_coords(c);
}

CycloElement random_one_unit(const ContextPtr& ctx, Rng& rng) {
  std::vector<u64> raw(ctx->rank() * ctx->n_work());
  for (auto& v : raw) v = rng() % ctx->coeff_modulus();
  return CycloElement::one(ctx) + CycloElement::from_raw(ctx, std::move(raw), ctx->precision()).times_pi();
}

CycloElement one_plus_pi_p(const ContextPtr& ctx) {
  return CycloElement::one(ctx) + CycloElement::pi(ctx).pow(static_cast<i64>(ctx->p()));
}

// x^e by repeated multiplication.
CycloElement power_by_products(const CycloElement& x, u64 e) {
  CycloElement acc = CycloElement::one(x.context());
  for (u64 i = 0; i < e; ++i) acc = acc * x;
  return acc;
}

u64 random_c_gamma(u64 p, u64 pK, Rng& rng) { return (1 + p * (rng() % (pK / p))) % pK; }

// Digits 1..p of a 1-unit, as residue indices.
std::vector<u64> class_key(const CycloElement& x) {
  std::vector<u64> key;
  for (std::size_t i = 1; i <= x.context()->p(); ++i) key.push_back(digit(x, i).index());
  return key;
}

// Classes of x^p for every class x of 1-units mod π^{p+1}.
std::set<std::vector<u64>> pth_powers_by_search(const ContextPtr& ctx) {
  const u64 p = ctx->p();
  const auto elems = ctx->residue_field()->elements();
  const u64 q = elems.size();
  u64 total = 1;
  for (u64 i = 0; i < p; ++i) total *= q;
  std::set<std::vector<u64>> out;
  for (u64 idx = 0; idx < total; ++idx) {
    std::vector<ResidueElement> digits{ctx->residue_field()->one()};
    for (u64 i = 0, t = idx; i < p; ++i, t /= q) digits.push_back(elems[t % q]);
    out.insert(class_key(power_by_products(CycloElement::from_digits(ctx, digits), p).truncated(
        static_cast<unsigned>(p + 1))));
  }
  return out;
}

// ---- criteria -------------------------------------------------------------

Tally eigenclass_enumeration() {
  Tally t;
  auto expect = [&](u64 p, unsigned n) {
    auto ctx = PrimeContext::make(p, n, static_cast<unsigned>(p + 1));
    std::set<std::vector<u64>> want;
    for (u64 s = 0; s < p; ++s)
      for (u64 tt = 0; tt < p; ++tt) want.insert(class_key(normal_form_element(ctx, s, tt)));
    const auto found = brute_force_eigenclasses(ctx, 1);
    std::set<std::vector<u64>> got;
    for (const auto& c : found) got.insert(class_key(c.element()));
    t.check(found.size() == p * p, ps(p, n) + ": class count " + std::to_string(found.size()));
    t.check(got == want, ps(p, n) + ": classes differ from the normal forms");
  };
  const auto start = std::chrono::steady_clock::now();
  expect(3, 1);
  expect(3, 2);
  expect(5, 1);
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.check(sec < 5.0, "enumeration took " + std::to_string(sec) + " s");
  return t;
}

Tally congruence_suite() {
  Tally t;
  for (u64 p : {3, 5, 7}) {
    const auto n = static_cast<unsigned>(p);
    auto ctx = PrimeContext::make(p, n);
    const auto m = static_cast<unsigned>(p + 1);
    const auto g = frobenius_generators(ctx, m);
    t.check(frobenius(g.u).congruent(g.u * CycloElement::zeta(ctx), m), ps(p, n) + ": u^{φ-1} != ζ");
    t.check(frobenius(g.v).congruent(g.v * one_plus_pi_p(ctx), m), ps(p, n) + ": v^{φ-1} != 1+π^p");
    t.check((power_by_products(g.u, p) * one_plus_pi_p(ctx)).congruent(CycloElement::one(ctx), m),
            ps(p, n) + ": u^p(1+π^p) != 1");
    t.check(power_by_products(g.v, p).congruent(CycloElement::one(ctx), m), ps(p, n) + ": v^p != 1");
  }
  return t;
}

Tally descent_equivalence() {
  Tally t;
  Rng rng(4001);
  for (u64 p : {3, 5, 7}) {
    const auto n = static_cast<unsigned>(p);
    const auto m = static_cast<unsigned>(p + 1);
    auto ctx = PrimeContext::make(p, n);
    const auto gens = frobenius_generators(ctx, m);
    for (int k = 0; k < 10; ++k) {
      const u64 c = random_c_gamma(p, ctx->coeff_modulus(), rng);
      const u64 e = (c - 1) / p;
      for (u64 s = 0; s < p; ++s)
        for (u64 tt = 0; tt < p; ++tt) {
          const std::string where = ps(p, n) + " c=" + std::to_string(c) + " (s,t)=(" + std::to_string(s) + "," +
                                    std::to_string(tt) + ")";
          const CycloElement q = normal_form_element(ctx, s, tt);
          const DescentResult r = qp_from_q({q, c, 1}, gens);
          const CycloElement direct = (q / power_by_products(r.w, p)).truncated(m);
          const CycloElement closed = normal_form_element(ctx, s, (tt + s * e) % p);
          t.check(direct.congruent(closed, m), where + ": q/w^p differs from the closed form");
          t.check(frobenius(direct).congruent(direct, m), where + ": q/w^p is not φ-fixed");
          bool descends = true;
          try {
            const CycloElement low = descend_subfield(direct, 1);
            bool same = true;
            for (unsigned i = 0; i < m; ++i) same = same && digit(low, i).coords() == digit(r.q_p, i).coords();
            t.check(same, where + ": descended value differs from q_p");
          } catch (const PreconditionError&) {
            descends = false;
          }
          t.check(descends, where + ": q/w^p has digits outside the base field");
        }
    }
  }
  return t;
}

Tally cocycle_identity() {
  Tally t;
  Rng rng(4002);
  int admissible = 0;
  for (u64 p : {3, 5})
    for (unsigned n : {1u, 2u}) {
      auto ctx = PrimeContext::make(p, n);
      const auto m = static_cast<unsigned>(p + 1);
      for (int i = 0; i < 13 && admissible < 50; ++i, ++admissible) {
        // a normal-form class times a random element of 1 + π^{p+1}R
        CycloElement noise = random_one_unit(ctx, rng) - CycloElement::one(ctx);
        for (unsigned j = 1; j < m; ++j) noise = noise.times_pi();
        const u64 s = rng() % p;
        const u64 tt = rng() % p;
        const CycloElement q = normal_form_element(ctx, s, tt) * (CycloElement::one(ctx) + noise);
        const u64 c = random_c_gamma(p, ctx->coeff_modulus(), rng);
        t.check(verify_cocycle(q, c, 4).holds, ps(p, n) + ": cocycle fails on an admissible pair");
      }
    }
  t.check(admissible == 50, "admissible pair count " + std::to_string(admissible));
  for (u64 p : {3, 5}) {
    auto ctx = PrimeContext::make(p, 2);
    const auto y = CycloElement::from_witt(teichmuller(ctx, ctx->residue_field()->generator()));
    const CycloElement q = CycloElement::one(ctx) + y * CycloElement::pi(ctx);
    t.check(!verify_cocycle(q, 1 + p, 4).holds, ps(p, 2) + ": cocycle holds on 1 + teich(y)π");
  }
  return t;
}

Tally splitting_lemma() {
  Tally t;
  const u64 p = 3;
  for (unsigned n : {1u, 2u}) {
    auto ctx = PrimeContext::make(p, n, 4);
    const auto powers = pth_powers_by_search(ctx);
    for (u64 s = 0; s < p; ++s)
      for (u64 tt = 0; tt < p; ++tt) {
        const std::string where = ps(p, n) + " (s,t)=(" + std::to_string(s) + "," + std::to_string(tt) + ")";
        const CycloElement q = normal_form_element(ctx, s, tt);
        const Verdict v = splitting_verdict(DescentProblem{q, 1, 1}).verdict;
        const bool trivial = s == 0 && tt == 0;
        t.check(v == (trivial ? Verdict::split : Verdict::not_split), where + ": verdict");
        t.check((powers.count(class_key(q)) > 0) == trivial, where + ": p-th power search disagrees");
      }
  }
  return t;
}

Tally log_dlog() {
  Tally t;
  Rng rng(4006);
  for (u64 p : {3, 5, 7}) {
    auto ctx = PrimeContext::make(p, 1);
    const auto F = ctx->residue_field();
    for (u64 s = 0; s < p; ++s) {
      const CycloElement zs = CycloElement::zeta(ctx).pow(static_cast<i64>(s));
      t.check(dlog_mod_pi(zs) == F->from_int(-static_cast<i64>(s)), ps(p, 1) + ": dlog ζ^" + std::to_string(s));
    }
    for (u64 tt = 0; tt < p; ++tt) {
      const CycloElement lq = log_one_unit(normal_form_element(ctx, 0, tt));
      t.check(lq.precision() > p && digit(lq, p) == F->from_int(static_cast<i64>(tt)),
              ps(p, 1) + ": digit_p of log (1+π^p)^" + std::to_string(tt));
    }
  }
  for (int i = 0; i < 200; ++i) {
    const u64 p = std::array<u64, 3>{3, 5, 7}[i % 3];
    auto ctx = PrimeContext::make(p, 2);
    const CycloElement a = random_one_unit(ctx, rng);
    const CycloElement b = random_one_unit(ctx, rng);
    t.check(log_one_unit(a * b) == log_one_unit(a) + log_one_unit(b), ps(p, 2) + ": log(ab) != log a + log b");
    const auto ua = a * CycloElement::from_witt(teichmuller(ctx, random_residue(ctx->residue_field(), rng) +
                                                                      ctx->residue_field()->one()));
    if (!ua.is_unit()) continue;
    t.check(dlog_mod_pi(ua * b) == dlog_mod_pi(ua) + dlog_mod_pi(b), ps(p, 2) + ": dlog(ab) != dlog a + dlog b");
  }
  return t;
}

Tally pow_padic_law() {
  Tally t;
  auto law = [&](const ContextPtr& ctx, const ResidueElement& r) {
    const u64 p = ctx->p();
    const auto m = static_cast<unsigned>(p + 1);
    const CycloElement x = CycloElement::one(ctx) + CycloElement::from_witt(teichmuller(ctx, r)) * CycloElement::pi(ctx);
    const CycloElement want = CycloElement::one(ctx) + CycloElement::from_witt(teichmuller(ctx, r.pow(p) - r)) *
                                                           CycloElement::pi(ctx).pow(static_cast<i64>(p));
    const std::string where = ps(p, ctx->n_work()) + " r=" + r.to_string();
    t.check(pow_padic_u(x, p).congruent(want, m), where + ": pow_padic");
    t.check(power_by_products(x, p).congruent(want, m), where + ": repeated product");
  };
  for (unsigned n : {1u, 2u, 3u}) {
    auto ctx = PrimeContext::make(3, n);
    for (const auto& r : ctx->residue_field()->elements()) law(ctx, r);
  }
  Rng rng(4007);
  for (u64 p : {5, 7}) {
    auto ctx = PrimeContext::make(p, 2);
    for (int i = 0; i < 100; ++i) law(ctx, random_residue(ctx->residue_field(), rng));
  }
  return t;
}

// Integer oracle for Σ_{d|n} χ1(n/d) χ2(d) d^{k-1} mod p.
i64 kronecker_m4(i64 n) { return n % 2 == 0 ? 0 : (n % 4 == 1 ? 1 : -1); }
i64 kronecker_m3(i64 n) { return n % 3 == 0 ? 0 : (n % 3 == 1 ? 1 : -1); }

u64 divisor_sum_mod(i64 (*chi)(i64), unsigned k, i64 n, u64 p) {
  i64 acc = 0;
  for (i64 d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    i64 dk = 1;
    for (unsigned i = 0; i + 1 < k; ++i) dk = (dk * d) % static_cast<i64>(p);
    acc = (acc + chi(d) * dk) % static_cast<i64>(p);
  }
  return static_cast<u64>((acc + static_cast<i64>(p)) % static_cast<i64>(p));
}

bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Tally modular_form_suite() {
  Tally t;
  Rng rng(4008);
  for (u64 p : {3, 5, 7}) {
    auto F = FiniteField::make(p, 2);
    std::vector<ResidueElement> a;
    for (int n = 0; n <= 500; ++n) a.push_back(random_residue(F, rng));
    const ModFormModP f(QExpansion(F, a), 3, 1, DirichletCharacter::principal(F, 1));
    t.check(theta_pow(f, static_cast<unsigned>(p)).qexp == theta(f).qexp, "θ^p != θ for p=" + std::to_string(p));
  }

  struct Example {
    u64 p;
    i64 D;
    i64 (*chi)(i64);
  };
  for (const Example ex : {Example{5, -4, kronecker_m4}, Example{7, -3, kronecker_m3}}) {
    const std::string where = "p=" + std::to_string(ex.p) + " D=" + std::to_string(ex.D);
    auto F = FiniteField::make(ex.p, 1);
    const auto one = DirichletCharacter::principal(F, 1);
    const auto chi = DirichletCharacter::kronecker(F, ex.D);
    const auto kp = static_cast<unsigned>(ex.p);

    for (unsigned k : {1u, kp}) {
      const ModFormModP E = eisenstein(k, one, chi, 2600);
      for (u64 l = 2; l <= 50; ++l) {
        if (!trial_prime(l) || (static_cast<u64>(-ex.D) * ex.p) % l == 0) continue;
        i64 lk = 1;
        for (unsigned i = 0; i + 1 < k; ++i) lk = lk * static_cast<i64>(l) % static_cast<i64>(ex.p);
        const ResidueElement lambda = F->from_int(1 + ex.chi(static_cast<i64>(l)) * lk);
        const ModFormModP T = hecke_T(E, l);
        bool eigen = true;
        for (std::size_t n = 0; n <= T.qexp.bound(); ++n) eigen = eigen && T.qexp[n] == lambda * E.qexp[n];
        t.check(eigen, where + " k=" + std::to_string(k) + ": T_" + std::to_string(l) + " eigenvalue");
      }
    }

    const ModFormModP f = eisenstein(kp, one, chi, 300);
    const ModFormModP g = eisenstein(1, one, chi, 300);
    bool oracle = true;
    for (i64 n = 1; n <= 300; ++n) {
      oracle = oracle && f.qexp[n].prime_value() == divisor_sum_mod(ex.chi, kp, n, ex.p);
      oracle = oracle && g.qexp[n].prime_value() == divisor_sum_mod(ex.chi, 1, n, ex.p);
    }
    t.check(oracle, where + ": coefficients differ from the divisor-sum oracle");
    t.check(exceptional_check(f, f.qexp[ex.p]), where + ": exceptional_check");
    t.check(companion_check(f, g, 300).holds(), where + ": companion_check");
  }
  return t;
}

Tally golden_reports(const std::string& jobs_dir) {
  Tally t;
  std::vector<GoldenCase> cases;
  try {
    cases = read_golden_manifest(jobs_dir);
  } catch (const std::exception& e) {
    t.check(false, e.what());
    return t;
  }
  std::set<Mode> modes;
  std::set<int> codes;
  const SelftestRunner nested = [] { return SelftestSummary{0, 1, {"nested selftest"}}; };
  for (const auto& c : cases) {
    const fs::path dir(jobs_dir);
    JobOverrides o;
    o.mode = c.mode;
    const CliOutcome got = run_cli_job((dir / (c.name + ".json")).string(), o, c.format, nested);
    std::string want_out;
    int want_code = -1;
    try {
      want_out = read_file(dir / "expected" / (c.name + ".out"));
      want_code = std::stoi(read_file(dir / "expected" / (c.name + ".exit")));
    } catch (const std::exception& e) {
      t.check(false, c.name + ": " + e.what());
      continue;
    }
    t.check(got.out == want_out, c.name + ": report differs from expected output");
    t.check(got.exit_code == want_code, c.name + ": exit code " + std::to_string(got.exit_code));
    const CliOutcome again = run_cli_job((dir / (c.name + ".json")).string(), o, c.format, nested);
    t.check(again.out == got.out, c.name + ": report is not deterministic");
    modes.insert(c.mode);
    codes.insert(want_code);
  }
  t.check(cases.size() >= 6, "fewer than 6 golden jobs");
  t.check(modes.size() == 6, "golden jobs cover " + std::to_string(modes.size()) + " of 6 modes");
  t.check(codes == std::set<int>{0, 1, 2, 3}, "golden jobs do not cover exit codes 0-3");
  return t;
}

// ---- selftest extras ------------------------------------------------------

Tally job_round_trip(const std::string& jobs_dir) {
  Tally t;
  std::size_t parsed = 0;
  for (const auto& entry : fs::directory_iterator(jobs_dir)) {
    if (entry.path().extension() != ".json") continue;
    JobOverrides o;
    o.base_dir = jobs_dir;
    JobSpec once;
    try {
      once = parse_job(read_file(entry.path()), o);
    } catch (const JobError&) {
      continue;  // documents that are meant to fail
    }
    ++parsed;
    const JobSpec twice = parse_job(emit_job(once), o);
    t.check(once == twice, entry.path().filename().string() + ": parse(emit(parse(d))) != parse(d)");
  }
  t.check(parsed > 0, "no parseable job documents in " + jobs_dir);
  return t;
}

Tally verdict_modes_agree() {
  Tally t;
  for (u64 p : {3, 5}) {
    auto ctx = PrimeContext::make(p, 1);
    for (u64 s = 0; s < p; ++s)
      for (u64 tt = 0; tt < p; ++tt) {
        const CycloElement q = normal_form_element(ctx, s, tt);
        const auto vq = splitting_verdict(DescentProblem{q, 1, 1});
        const auto vi = splitting_verdict(InvariantInputs{log_one_unit(q), -dlog_mod_pi(q)});
        t.check(vq.verdict == vi.verdict, ps(p, 1) + ": q-mode and invariant-mode verdicts differ");
      }
  }
  return t;
}

CriterionResult timed(int id, const std::string& name, const std::function<Tally()>& body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Tally t = body();
    r.passed = t.passed();
    r.detail = t.detail();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::vector<GoldenCase> read_golden_manifest(const std::string& jobs_dir) {
  std::istringstream in(read_file(fs::path(jobs_dir) / "golden.txt"));
  std::vector<GoldenCase> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name, mode, format;
    if (!(ls >> name >> mode >> format)) throw std::runtime_error("bad golden manifest line: " + line);
    const auto m = parse_mode(mode);
    if (!m || (format != "json" && format != "text")) throw std::runtime_error("bad golden manifest line: " + line);
    out.push_back({name, *m, format == "json" ? ReportFormat::json : ReportFormat::text});
  }
  return out;
}

CliOutcome run_cli_job(const std::string& job_path, JobOverrides o, ReportFormat format,
                       const SelftestRunner& selftest) {
  o.base_dir = fs::path(job_path).parent_path().string();
  if (o.base_dir.empty()) o.base_dir = ".";
  VerdictReport report;
  try {
    std::string text;
    try {
      text = read_file(job_path);
    } catch (const std::runtime_error& e) {
      throw JobError({{"job", e.what()}}, true);
    }
    report = run_job(parse_job(text, o), selftest);
  } catch (const JobError& e) {
    report = job_error_report(e, o.mode);
  }
  return {report, emit_report(report, format), report.exit_code};
}

std::vector<CriterionResult> run_all(const Options& options) {
  std::vector<CriterionResult> out;
  out.push_back(timed(1, "eigenclass enumeration oracle", eigenclass_enumeration));
  out.push_back(timed(2, "Frobenius generator congruences", congruence_suite));
  out.push_back(timed(3, "q/w^p closed form and descent", descent_equivalence));
  out.push_back(timed(4, "cocycle identity", cocycle_identity));
  out.push_back(timed(5, "splitting lemma against p-th power search", splitting_lemma));
  out.push_back(timed(6, "log/dlog consistency", log_dlog));
  out.push_back(timed(7, "pow_padic law", pow_padic_law));
  out.push_back(timed(8, "modular-form suite", modular_form_suite));
  out.push_back(timed(9, "CLI golden reports", [&] { return golden_reports(options.jobs_dir); }));
  return out;
}

std::vector<CriterionResult> run_selftest_suite(const Options& options) {
  auto out = run_all(options);
  out.push_back(timed(10, "job document round trip", [&] { return job_round_trip(options.jobs_dir); }));
  out.push_back(timed(11, "q-mode and invariant-mode verdicts agree", verdict_modes_agree));
  return out;
}

SelftestSummary summarize(const std::vector<CriterionResult>& results) {
  SelftestSummary s;
  s.total = results.size();
  for (const auto& r : results) {
    if (r.passed) ++s.passed;
    else s.failed.push_back(std::to_string(r.id) + " " + r.name + ": " + r.detail);
  }
  return s;
}

}  // namespace exsplit::acceptance
