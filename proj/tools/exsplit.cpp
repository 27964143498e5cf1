#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "exsplit/acceptance.hpp"
#include "exsplit/errors.hpp"

using namespace exsplit;

namespace {

struct ModeArgs {
  std::string job;
  std::string format = "json";
  std::optional<unsigned> precision;
  std::optional<unsigned> n_work;
};

SelftestRunner selftest_runner(const std::string& jobs_dir) {
  return [jobs_dir] {
    const auto results = acceptance::run_selftest_suite({jobs_dir});
    for (const auto& r : results)
      std::fprintf(stderr, "selftest %2d %s %s (%s, %.2f s)\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
                   r.detail.c_str(), r.seconds);
    return acceptance::summarize(results);
  };
}

int run_mode(Mode mode, const ModeArgs& a, const std::string& jobs_dir) {
  const ReportFormat format = a.format == "text" ? ReportFormat::text : ReportFormat::json;
  const SelftestRunner runner = selftest_runner(jobs_dir);
  if (a.job.empty()) {
    JobSpec spec;
    spec.mode = Mode::selftest;
    const VerdictReport r = run_job(spec, runner);
    std::cout << emit_report(r, format);
    return r.exit_code;
  }
  JobOverrides o;
  o.mode = mode;
  o.precision = a.precision;
  o.n_work = a.n_work;
  const acceptance::CliOutcome out = acceptance::run_cli_job(a.job, o, format, runner);
  if (out.exit_code != 0) {
    std::cerr << "exsplit: " << out.report.failure_reason.value_or("failed") << "\n";
    for (const auto& c : out.report.failed_conditions) std::cerr << "  " << c << "\n";
  }
  std::cout << out.out;
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Splitting criterion for exceptional mod-p Galois representations"};
  app.require_subcommand(1);
  std::string jobs_dir = EXSPLIT_JOBS_DIR;

  const Mode modes[] = {Mode::normal_form, Mode::qp_from_q, Mode::companion,
                        Mode::exceptional, Mode::verdict,   Mode::selftest};
  std::vector<std::pair<Mode, CLI::App*>> subs;
  const char* about[] = {"reduce a 1-unit q to ζ^s(1+π^p)^t mod π^{p+1}",
                         "descend q to q_p = q/w^p and decide splitting",
                         "check θg = θ^{p+1-k} f to a bound",
                         "check a_p != 0, k = p and ε(p) = a_p^2",
                         "splitting verdict from q or from the two invariants",
                         "run the acceptance suite"};
  std::vector<ModeArgs> args(std::size(modes));
  for (std::size_t i = 0; i < std::size(modes); ++i) {
    auto* sub = app.add_subcommand(to_string(modes[i]), about[i]);
    auto* job = sub->add_option("--job", args[i].job, "job document (JSON)")->check(CLI::ExistingFile);
    if (modes[i] != Mode::selftest) job->required();
    sub->add_option("--format", args[i].format, "report format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--precision", args[i].precision, "working precision M (digits of π)");
    sub->add_option("--n-work", args[i].n_work, "residue degree of the working field");
    if (modes[i] == Mode::selftest) sub->add_option("--jobs-dir", jobs_dir, "directory of golden jobs");
    subs.emplace_back(modes[i], sub);
  }

  u64 p = 0;
  unsigned k = 0, m = 1;
  i64 disc = 0;
  std::size_t bound = 0;
  auto* eis = app.add_subcommand("eisenstein", "write E_k^{1,χ_D} mod p in the q-expansion exchange format");
  eis->add_option("--p", p, "prime")->required();
  eis->add_option("--k", k, "weight")->required();
  eis->add_option("--disc", disc, "fundamental discriminant D of χ_D (0 for the trivial character)");
  eis->add_option("--bound", bound, "last coefficient index")->required();
  eis->add_option("--m", m, "degree of the coefficient field over F_p");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_parse;
  }

  try {
    if (eis->parsed()) {
      auto F = FiniteField::make(p, m);
      const auto one = DirichletCharacter::principal(F, 1);
      const auto chi = disc == 0 ? one : DirichletCharacter::kronecker(F, disc);
      std::cout << write_qexp(eisenstein(k, one, chi, bound));
      return exit_ok;
    }
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i].second->parsed()) return run_mode(subs[i].first, args[i], jobs_dir);
  } catch (const std::exception& e) {
    std::cerr << "exsplit: " << e.what() << "\n";
    return exit_precondition;
  }
  return exit_parse;
}
