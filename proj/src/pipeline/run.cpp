#include <json.hpp>
#include <sstream>

#include "exsplit/errors.hpp"
#include "exsplit/pipeline.hpp"

namespace exsplit {

using json = nlohmann::json;

namespace {

CycloElement element_from_digits(const ContextPtr& ctx, const std::vector<DigitVector>& digits) {
  const auto& F = ctx->residue_field();
  std::vector<ResidueElement> d;
  for (const auto& v : digits) {
    std::vector<u64> c(F->degree(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i];
    d.push_back(F->from_coords(c));
  }
  return CycloElement::from_digits(ctx, d).truncated(static_cast<unsigned>(digits.size()));
}

// A unit q becomes a 1-unit by dividing out the Teichmüller lift of its
// leading digit.
CycloElement one_unit_part(const CycloElement& q) {
  if (q.precision() == 0 || !q.is_unit()) throw PreconditionError("q is not a unit (digit 0 vanishes)");
  if (q.is_one_unit()) return q;
  return q / CycloElement::from_witt(teichmuller(q.context(), digit(q, 0)));
}

std::string nf_string(const EigenNormalForm& nf, u64 p) {
  return "ζ^" + std::to_string(nf.s) + "(1+π^" + std::to_string(p) + ")^" + std::to_string(nf.t);
}

void run_normal_form(const JobSpec& spec, VerdictReport& r) {
  auto ctx = PrimeContext::make(spec.p, spec.n_work, spec.precision);
  const CycloElement q = one_unit_part(element_from_digits(ctx, *spec.q_digits));
  r.precision_used = static_cast<unsigned>(spec.p + 1);
  r.extension_degree_used = spec.n_work;
  const auto nfr = extract_normal_form(q);
  if (!nfr.admissible) {
    const std::size_t pos = nfr.failing_position.value_or(0);
    throw NotAdmissible(pos, "q is not admissible: digit " + std::to_string(pos) + " rules out the form ζ^s(1+π^p)^t");
  }
  r.s = nfr.nf.s;
  r.t = nfr.nf.t;
  r.summary = "q ≡ " + nf_string(nfr.nf, spec.p) + " mod π^" + std::to_string(spec.p + 1);
}

void run_descent(const JobSpec& spec, VerdictReport& r) {
  auto ctx = PrimeContext::make(spec.p, spec.n_work, spec.precision);
  const CycloElement q = one_unit_part(element_from_digits(ctx, *spec.q_digits));
  const DescentProblem problem{q, *spec.c_gamma % ctx->coeff_modulus(), spec.descent_degree.value_or(1)};
  r.precision_used = static_cast<unsigned>(spec.p + 1);
  r.extension_degree_used = spec.n_work;
  const DescentResult d = qp_from_q(problem);
  r.s = d.nf_qp.s;
  r.t = d.nf_qp.t;
  r.precision_used = d.precision_used;
  r.extension_degree_used = d.extension_degree_used;
  r.verdict = is_pth_power_class(d.nf_qp) ? Verdict::split : Verdict::not_split;
  if (d.nf_qp.s != 0) r.failed_conditions.push_back("s != 0");
  if (d.nf_qp.t != 0) r.failed_conditions.push_back("t != 0");
  r.summary = "q ≡ " + nf_string(d.nf_q, spec.p) + ", q_p ≡ " + nf_string(d.nf_qp, spec.p) + " over the degree-" +
              std::to_string(problem.n) + " subfield";
}

void run_invariant_verdict(const JobSpec& spec, VerdictReport& r) {
  auto ctx = PrimeContext::make(spec.p, spec.n_work, spec.precision);
  const CycloElement inner = element_from_digits(ctx, *spec.inner_infty_digits);
  std::vector<u64> c(ctx->residue_field()->degree(), 0);
  for (std::size_t i = 0; i < spec.cup_I->size(); ++i) c[i] = (*spec.cup_I)[i];
  const ResidueElement cup = ctx->residue_field()->from_coords(c);
  if (inner.precision() < spec.p + 1)
    throw PreconditionError("inner_infty_digits must give at least p+1 = " + std::to_string(spec.p + 1) + " digits");
  const SplittingVerdict v = splitting_verdict(InvariantInputs{inner, cup});
  r.verdict = v.verdict;
  r.s = v.s;
  r.t = v.t;
  r.failed_conditions = v.failed_conditions;
  r.precision_used = v.precision_used;
  r.extension_degree_used = v.extension_degree_used;
  r.summary = v.verdict == Verdict::split ? "both invariants vanish" : "an invariant is nonzero";
}

void run_companion(const JobSpec& spec, VerdictReport& r) {
  const auto& f = *spec.form->form;
  const auto& g = *spec.companion_form->form;
  const std::size_t B = *spec.bound;
  const CompanionResult c = companion_check(f, g, B);
  switch (c.status) {
    case CompanionStatus::holds:
      r.result = true;
      r.summary = "companion relation holds to bound " + std::to_string(B);
      break;
    case CompanionStatus::coefficient_mismatch:
      r.result = false;
      r.summary = "companion relation fails at q^" + std::to_string(*c.first_mismatch);
      break;
    case CompanionStatus::weight_mismatch:
      throw PreconditionError("weight mismatch: companion weight must be p+1-k = " +
                              std::to_string(static_cast<i64>(f.p + 1) - static_cast<i64>(f.k)) + ", got " +
                              std::to_string(g.k));
    case CompanionStatus::character_mismatch:
      throw PreconditionError("character mismatch: the two forms must share their character");
    case CompanionStatus::level_mismatch:
      throw PreconditionError("level mismatch: the two forms must share p and N");
  }
}

void run_exceptional(const JobSpec& spec, VerdictReport& r) {
  const auto& f = *spec.form->form;
  if (f.qexp.bound() < f.p) throw PreconditionError("form must reach a_p");
  const ResidueElement& a_p = f.qexp[f.p];
  r.result = exceptional_check(f, a_p);
  const ResidueElement e = f.eps(static_cast<i64>(f.p));
  r.summary = "k = " + std::to_string(f.k) + ", a_p = " + format_value(a_p) + ", ε(p) = " + format_value(e) +
              ", a_p^2 = " + format_value(a_p * a_p);
  if (a_p.is_zero()) r.failed_conditions.push_back("a_p = 0 (not ordinary)");
  if (f.k != f.p) r.failed_conditions.push_back("k != p");
  if (!(e == a_p * a_p)) r.failed_conditions.push_back("ε(p) != a_p^2");
}

void run_selftest(const SelftestRunner& runner, VerdictReport& r) {
  if (!runner) throw PreconditionError("selftest is not available in this build");
  const SelftestSummary s = runner();
  r.result = s.passed == s.total;
  r.summary = std::to_string(s.passed) + "/" + std::to_string(s.total) + " criteria passed";
  r.failed_conditions = s.failed;
  if (!*r.result) {
    r.failure_reason = "acceptance criteria failed";
    r.exit_code = exit_precondition;
  }
}

}  // namespace

VerdictReport run_job(const JobSpec& spec, const SelftestRunner& selftest) {
  VerdictReport r;
  r.mode = spec.mode;
  r.input_digest = fnv1a_hex(emit_job(spec));
  const bool has_verdict = spec.mode == Mode::verdict || spec.mode == Mode::qp_from_q;
  auto fail = [&](int code, const std::string& why) {
    r.exit_code = code;
    r.failure_reason = why;
    r.result.reset();
    if (has_verdict) {
      r.verdict = Verdict::inconclusive;
      r.s.reset();
      r.t.reset();
      r.failed_conditions.clear();
    }
  };
  try {
    switch (spec.mode) {
      case Mode::normal_form:
        run_normal_form(spec, r);
        break;
      case Mode::qp_from_q:
        run_descent(spec, r);
        break;
      case Mode::verdict:
        if (spec.inner_infty_digits) run_invariant_verdict(spec, r);
        else run_descent(spec, r);
        break;
      case Mode::companion:
        run_companion(spec, r);
        break;
      case Mode::exceptional:
        run_exceptional(spec, r);
        break;
      case Mode::selftest:
        run_selftest(selftest, r);
        break;
    }
  } catch (const ExtensionNeeded& e) {
    fail(exit_extension, e.what());
    r.suggested_n_work = e.suggested_n_work();
  } catch (const PreconditionError& e) {
    fail(exit_precondition, e.what());
  } catch (const InternalCheckFailed& e) {
    fail(exit_precondition, std::string("internal check failed: ") + e.what());
  }
  return r;
}

VerdictReport job_error_report(const JobError& e, std::optional<Mode> mode) {
  VerdictReport r;
  r.mode = mode.value_or(Mode::selftest);
  r.exit_code = e.syntax() ? exit_parse : exit_precondition;
  if (mode == Mode::verdict || mode == Mode::qp_from_q) r.verdict = Verdict::inconclusive;
  std::string reason = e.syntax() ? "job document could not be parsed" : "job document is invalid";
  r.failure_reason = reason;
  for (const auto& i : e.issues()) r.failed_conditions.push_back(i.path + ": " + i.message);
  return r;
}

std::string emit_report(const VerdictReport& r, ReportFormat format) {
  json o = json::object();
  o["mode"] = to_string(r.mode);
  if (r.verdict) o["verdict"] = to_string(*r.verdict);
  if (r.s) o["s"] = *r.s;
  if (r.t) o["t"] = *r.t;
  if (r.result) o["result"] = *r.result;
  o["precision_used"] = r.precision_used;
  o["extension_degree_used"] = r.extension_degree_used;
  if (!r.failed_conditions.empty()) o["failed_conditions"] = r.failed_conditions;
  if (r.failure_reason) o["failure_reason"] = *r.failure_reason;
  if (r.suggested_n_work) o["suggested_n_work"] = *r.suggested_n_work;
  if (!r.summary.empty()) o["summary"] = r.summary;
  if (!r.input_digest.empty()) o["input_digest"] = r.input_digest;
  o["exit_code"] = r.exit_code;
  if (format == ReportFormat::json) return o.dump(2) + "\n";

  std::ostringstream os;
  for (auto it = o.begin(); it != o.end(); ++it) {
    os << it.key() << ": ";
    if (it->is_string()) {
      os << it->get<std::string>() << "\n";
    } else if (it->is_array()) {
      os << "\n";
      for (const auto& item : *it) os << "  - " << item.get<std::string>() << "\n";
    } else {
      os << it->dump() << "\n";
    }
  }
  return os.str();
}

}  // namespace exsplit
