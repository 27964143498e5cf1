#pragma once

// Job documents, dispatch to the computational modes, and deterministic
// reports.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exsplit/descent.hpp"
#include "exsplit/modforms.hpp"

namespace exsplit {

enum class Mode { normal_form, qp_from_q, companion, exceptional, verdict, selftest };
const char* to_string(Mode m);
std::optional<Mode> parse_mode(const std::string& s);

using DigitVector = std::vector<u64>;

/// A form given inline (k, N, m, character table, coefficients) or as a
/// q-expansion exchange file.
struct FormBlock {
  std::optional<std::string> qexp_file;
  unsigned k = 0;
  u64 N = 1;
  unsigned m = 1;
  std::vector<DigitVector> character;
  std::vector<DigitVector> coefficients;

  std::shared_ptr<const ModFormModP> form;  // resolved at parse time
};

struct JobSpec {
  Mode mode = Mode::selftest;
  u64 p = 0;
  unsigned n_work = 1;
  unsigned precision = 0;
  std::optional<unsigned> descent_degree;
  std::optional<std::vector<DigitVector>> q_digits;
  std::optional<u64> c_gamma;
  std::optional<std::vector<DigitVector>> inner_infty_digits;
  std::optional<std::string> uniformizer;
  std::optional<DigitVector> cup_I;
  std::optional<FormBlock> form;
  std::optional<FormBlock> companion_form;
  std::optional<std::size_t> bound;
};

/// Command-line values that take precedence over the document.
struct JobOverrides {
  std::optional<Mode> mode;
  std::optional<unsigned> precision;
  std::optional<unsigned> n_work;
  std::string base_dir = ".";  // for relative qexp_file paths
};

struct JobIssue {
  std::string path;
  std::string message;
};

/// Every problem found in a job document. Syntax and shape problems (bad
/// JSON, wrong types, unknown keys) are parse errors; the rest are
/// precondition errors.
class JobError : public std::runtime_error {
 public:
  JobError(std::vector<JobIssue> issues, bool syntax);
  const std::vector<JobIssue>& issues() const noexcept { return issues_; }
  bool syntax() const noexcept { return syntax_; }

 private:
  std::vector<JobIssue> issues_;
  bool syntax_;
};

JobSpec parse_job(const std::string& document, const JobOverrides& overrides = {});
/// Canonical JSON with every default filled in; parse_job accepts it back.
std::string emit_job(const JobSpec& spec);
bool operator==(const JobSpec& a, const JobSpec& b);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

struct VerdictReport {
  Mode mode = Mode::selftest;
  std::optional<Verdict> verdict;
  std::optional<u64> s;
  std::optional<u64> t;
  std::optional<bool> result;
  unsigned precision_used = 0;
  unsigned extension_degree_used = 0;
  std::vector<std::string> failed_conditions;
  std::optional<std::string> failure_reason;
  std::optional<std::size_t> suggested_n_work;
  std::string summary;
  std::string input_digest;
  int exit_code = 0;
};

enum ExitCode { exit_ok = 0, exit_parse = 1, exit_precondition = 2, exit_extension = 3 };

struct SelftestSummary {
  std::size_t passed = 0;
  std::size_t total = 0;
  std::vector<std::string> failed;
};
using SelftestRunner = std::function<SelftestSummary()>;

/// Never throws for mathematical failures: they become an inconclusive
/// report with failure_reason and a nonzero exit code. Selftest mode calls
/// the supplied runner.
VerdictReport run_job(const JobSpec& spec, const SelftestRunner& selftest = {});

enum class ReportFormat { json, text };
std::string emit_report(const VerdictReport& report, ReportFormat format);

/// Report for a document that could not be parsed.
VerdictReport job_error_report(const JobError& e, std::optional<Mode> mode);

}  // namespace exsplit
