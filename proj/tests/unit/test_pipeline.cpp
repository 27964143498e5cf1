#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "exsplit/acceptance.hpp"
#include "exsplit/errors.hpp"

using namespace exsplit;
namespace fs = std::filesystem;

namespace {

const std::string kJobs = EXSPLIT_JOBS_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

JobError parse_error(const std::string& doc, const JobOverrides& o = {}) {
  try {
    parse_job(doc, o);
  } catch (const JobError& e) {
    return e;
  }
  FAIL("expected JobError");
  return JobError({}, false);
}

bool has_issue(const JobError& e, const std::string& path, const std::string& fragment) {
  for (const auto& i : e.issues())
    if (i.path == path && i.message.find(fragment) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("mode names") {
  for (Mode m : {Mode::normal_form, Mode::qp_from_q, Mode::companion, Mode::exceptional, Mode::verdict,
                 Mode::selftest})
    CHECK(parse_mode(to_string(m)) == m);
  CHECK_FALSE(parse_mode("qp_from_q").has_value());
}

TEST_CASE("parse_job fills defaults") {
  const JobSpec s = parse_job(R"({"mode": "normal-form", "p": 5, "q_digits": [[1], [4]]})");
  CHECK(s.mode == Mode::normal_form);
  CHECK(s.p == 5);
  CHECK(s.precision == 7);
  CHECK(s.n_work == 1);
  REQUIRE(s.q_digits.has_value());
  CHECK(s.q_digits->size() == 2);

  const JobSpec d = parse_job(R"({"mode": "qp-from-q", "p": 3, "q_digits": [[1], [2]], "c_gamma": 4})");
  CHECK(d.descent_degree == std::optional<unsigned>{1});
  CHECK(d.n_work == 3);

  JobOverrides o;
  o.mode = Mode::qp_from_q;
  o.precision = 6;
  o.n_work = 6;
  const JobSpec e = parse_job(R"({"p": 3, "q_digits": [[1], [2]], "c_gamma": 4})", o);
  CHECK(e.mode == Mode::qp_from_q);
  CHECK(e.precision == 6);
  CHECK(e.n_work == 6);
}

TEST_CASE("parse_job reports every problem at once") {
  const auto e = parse_error(R"({"mode": "qp-from-q", "p": 9, "q_digits": [[1]], "colour": 1})");
  CHECK(e.syntax());
  CHECK(has_issue(e, "colour", "unknown key"));

  const auto f = parse_error(R"({"mode": "qp-from-q", "p": 2, "q_digits": [[1]], "bound": 3})");
  CHECK_FALSE(f.syntax());
  CHECK(has_issue(f, "p", "p must be an odd prime (p = 2 is excluded)"));
  CHECK(has_issue(f, "c_gamma", "required in qp-from-q mode"));
  CHECK(has_issue(f, "bound", "not used in qp-from-q mode"));
  CHECK(f.issues().size() >= 3);
}

TEST_CASE("parse_job semantic errors") {
  CHECK(has_issue(parse_error(R"({"mode": "qp-from-q", "p": 3, "q_digits": [[1]]})"), "c_gamma",
                  "required in qp-from-q mode"));
  CHECK(has_issue(parse_error(R"({"mode": "qp-from-q", "p": 3, "q_digits": [[1]], "c_gamma": 5})"), "c_gamma",
                  "congruent to 1 mod p"));
  CHECK(has_issue(parse_error(R"({"mode": "normal-form", "p": 3, "q_digits": [[3]]})"), "q_digits[0]", "not below p"));
  CHECK(has_issue(parse_error(R"({"mode": "normal-form", "p": 3, "precision": 3, "q_digits": [[1]]})"), "precision",
                  "at least p+1"));
  CHECK(has_issue(
      parse_error(R"({"mode": "verdict", "p": 3, "inner_infty_digits": [[0]], "cup_I": [0], "uniformizer": "pi"})"),
      "uniformizer", "1-zeta"));
  CHECK(has_issue(parse_error(R"({"mode": "verdict", "p": 3, "q_digits": [[1]], "c_gamma": 4, "cup_I": [0]})"), "$",
                  "not both"));
  CHECK(has_issue(parse_error(R"({"mode": "qp-from-q", "p": 3, "n_work": 4, "descent_degree": 3,
                                 "q_digits": [[1]], "c_gamma": 4})"),
                  "n_work", "multiple of the descent degree"));

  JobOverrides o;
  o.mode = Mode::companion;
  CHECK(has_issue(parse_error(R"({"mode": "normal-form", "p": 3, "q_digits": [[1]]})", o), "mode", "does not match"));
}

TEST_CASE("parse_job syntax errors") {
  CHECK(parse_error("{").syntax());
  CHECK(parse_error("[]").syntax());
  CHECK(parse_error(R"({"mode": "normal-form", "p": "5", "q_digits": [[1]]})").syntax());
  CHECK(parse_error(R"({"mode": "normal-form", "p": 5, "q_digits": [1]})").syntax());
}

TEST_CASE("inline forms") {
  const JobSpec s = parse_job(R"({"mode": "exceptional", "p": 5,
      "form": {"k": 5, "N": 4, "character": [[0], [1], [0], [4]],
               "coefficients": [[0], [1], [1], [0], [1], [1]]}})");
  REQUIRE(s.form.has_value());
  REQUIRE(s.form->form != nullptr);
  CHECK(s.form->form->k == 5);
  CHECK(s.form->form->qexp.bound() == 5);
  const VerdictReport r = run_job(s);
  CHECK(r.exit_code == 0);
  CHECK(r.result == std::optional<bool>{true});

  const auto e = parse_error(R"({"mode": "exceptional", "p": 5,
      "form": {"k": 5, "N": 4, "character": [[0], [1], [0], [2]], "coefficients": [[0]]}})");
  CHECK_FALSE(e.syntax());
  CHECK_FALSE(e.issues().empty());
}

TEST_CASE("shipped jobs round trip through emit_job") {
  JobOverrides o;
  o.base_dir = kJobs;
  std::size_t parsed = 0;
  for (const auto& entry : fs::directory_iterator(kJobs)) {
    if (entry.path().extension() != ".json") continue;
    JobSpec once;
    try {
      once = parse_job(slurp(entry.path()), o);
    } catch (const JobError&) {
      continue;
    }
    ++parsed;
    const std::string emitted = emit_job(once);
    const JobSpec twice = parse_job(emitted, o);
    CHECK(once == twice);
    CHECK(emit_job(twice) == emitted);
  }
  CHECK(parsed >= 6);
}

TEST_CASE("run_job maps outcomes to exit codes") {
  auto run = [](const std::string& doc) { return run_job(parse_job(doc)); };

  const auto ok = run(R"({"mode": "qp-from-q", "p": 3, "q_digits": [[1], [2], [0], [0]], "c_gamma": 4})");
  CHECK(ok.exit_code == exit_ok);
  CHECK(ok.verdict == Verdict::not_split);
  CHECK(ok.s == std::optional<u64>{1});
  CHECK(ok.t == std::optional<u64>{1});

  const auto ext =
      run(R"({"mode": "qp-from-q", "p": 3, "n_work": 1, "q_digits": [[1], [2], [0], [0]], "c_gamma": 4})");
  CHECK(ext.exit_code == exit_extension);
  CHECK(ext.suggested_n_work == std::optional<std::size_t>{3});
  CHECK(ext.verdict == Verdict::inconclusive);
  CHECK_FALSE(ext.s.has_value());

  const auto bad = run(R"({"mode": "normal-form", "p": 5, "q_digits": [[1], [0], [1], [0], [0], [0]]})");
  CHECK(bad.exit_code == exit_precondition);
  REQUIRE(bad.failure_reason.has_value());
  CHECK(bad.failure_reason->find("digit 2") != std::string::npos);

  const auto nonunit = run(R"({"mode": "normal-form", "p": 3, "q_digits": [[0], [1], [0], [0]]})");
  CHECK(nonunit.exit_code == exit_precondition);

  const auto split = run(R"({"mode": "verdict", "p": 3, "q_digits": [[1], [0], [0], [0]], "c_gamma": 4})");
  CHECK(split.verdict == Verdict::split);
  CHECK(split.exit_code == exit_ok);

  const auto self = run_job(parse_job(R"({"mode": "selftest"})"), [] { return SelftestSummary{2, 3, {"x"}}; });
  CHECK(self.exit_code == exit_precondition);
  CHECK(self.result == std::optional<bool>{false});
}

TEST_CASE("reports are deterministic") {
  const JobSpec s = parse_job(R"({"mode": "verdict", "p": 3, "inner_infty_digits": [[0], [0], [0], [0]],
                                  "cup_I": [0], "uniformizer": "1-zeta"})");
  const auto a = emit_report(run_job(s), ReportFormat::json);
  const auto b = emit_report(run_job(parse_job(emit_job(s))), ReportFormat::json);
  CHECK(a == b);
  const auto text = emit_report(run_job(s), ReportFormat::text);
  CHECK(text.find("verdict: split\n") != std::string::npos);
  CHECK(text.find("exit_code: 0\n") != std::string::npos);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("job_error_report") {
  const JobError e({{"p", "required"}}, false);
  const auto r = job_error_report(e, Mode::verdict);
  CHECK(r.exit_code == exit_precondition);
  CHECK(r.verdict == Verdict::inconclusive);
  REQUIRE(r.failed_conditions.size() == 1);
  CHECK(r.failed_conditions[0] == "p: required");
  CHECK(job_error_report(JobError({{"$", "x"}}, true), std::nullopt).exit_code == exit_parse);
}

TEST_CASE("run_cli_job on a missing file is a parse error") {
  JobOverrides o;
  o.mode = Mode::normal_form;
  const auto out = acceptance::run_cli_job(kJobs + "/does-not-exist.json", o, ReportFormat::json);
  CHECK(out.exit_code == exit_parse);
}
