#pragma once

#include <string>
#include <vector>

#include "exsplit/pipeline.hpp"

namespace exsplit::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct Options {
  std::string jobs_dir;
};

/// One entry of jobs/golden.txt: "<name> <mode> <format>", with the job at
/// <name>.json and the expected stdout and exit code under expected/.
struct GoldenCase {
  std::string name;
  Mode mode;
  ReportFormat format;
};
std::vector<GoldenCase> read_golden_manifest(const std::string& jobs_dir);

/// Runs criteria 1-9. Every comparison is exact.
std::vector<CriterionResult> run_all(const Options& options);

/// Criteria 1-9 plus the extra selftest checks (job round trip, verdict-mode
/// agreement).
std::vector<CriterionResult> run_selftest_suite(const Options& options);

SelftestSummary summarize(const std::vector<CriterionResult>& results);

/// Process-level behaviour of the CLI for a job file: stdout and exit code.
/// overrides.base_dir is replaced by the job file's directory.
struct CliOutcome {
  VerdictReport report;
  std::string out;
  int exit_code = 0;
};
CliOutcome run_cli_job(const std::string& job_path, JobOverrides overrides, ReportFormat format,
                       const SelftestRunner& selftest = {});

}  // namespace exsplit::acceptance
