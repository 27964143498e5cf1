#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "exsplit/errors.hpp"
#include "exsplit/pipeline.hpp"

namespace exsplit {

using json = nlohmann::json;

namespace {

constexpr unsigned kMaxNWork = 32;
const char* const kUniformizer = "1-zeta";

struct Collector {
  std::vector<JobIssue> syntax;
  std::vector<JobIssue> semantic;

  void bad_shape(const std::string& path, const std::string& msg) { syntax.push_back({path, msg}); }
  void bad_value(const std::string& path, const std::string& msg) { semantic.push_back({path, msg}); }
};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix, Collector& c) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) c.bad_shape(prefix + it.key(), "unknown key");
}

std::optional<u64> get_uint(const json& obj, const std::string& key, const std::string& path, Collector& c) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<i64>() < 0)) {
    c.bad_shape(path, "expected a non-negative integer");
    return std::nullopt;
  }
  return v.get<u64>();
}

std::optional<DigitVector> get_digit_vector(const json& v, const std::string& path, Collector& c) {
  if (!v.is_array()) {
    c.bad_shape(path, "expected an array of integers");
    return std::nullopt;
  }
  DigitVector out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_unsigned()) {
      c.bad_shape(path + "[" + std::to_string(i) + "]", "expected a non-negative integer");
      return std::nullopt;
    }
    out.push_back(v[i].get<u64>());
  }
  return out;
}

std::optional<std::vector<DigitVector>> get_digit_list(const json& obj, const std::string& key, const std::string& path,
                                                       Collector& c) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_array()) {
    c.bad_shape(path, "expected an array of digit vectors");
    return std::nullopt;
  }
  std::vector<DigitVector> out;
  bool ok = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto d = get_digit_vector(v[i], path + "[" + std::to_string(i) + "]", c);
    if (!d) ok = false;
    else out.push_back(std::move(*d));
  }
  if (!ok) return std::nullopt;
  return out;
}

void check_digits(const std::vector<DigitVector>& digits, u64 p, unsigned width, const std::string& path,
                  Collector& c) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    if (digits[i].size() > width)
      c.bad_value(at, "digit vector has " + std::to_string(digits[i].size()) + " coordinates, more than the degree " +
                          std::to_string(width));
    for (u64 v : digits[i])
      if (v >= p) c.bad_value(at, "coordinate " + std::to_string(v) + " is not below p = " + std::to_string(p));
  }
}

ResidueElement to_residue(const FieldPtr& F, const DigitVector& v) {
  std::vector<u64> c(F->degree(), 0);
  for (std::size_t i = 0; i < v.size() && i < c.size(); ++i) c[i] = v[i];
  return F->from_coords(c);
}

std::optional<FormBlock> parse_form(const json& doc, const std::string& key, u64 p, const std::string& base_dir,
                                    Collector& c) {
  if (!doc.contains(key)) return std::nullopt;
  const json& v = doc.at(key);
  const std::string path = key;
  if (!v.is_object()) {
    c.bad_shape(path, "expected an object");
    return std::nullopt;
  }
  reject_unknown(v, {"qexp_file", "k", "N", "m", "character", "coefficients"}, path + ".", c);
  FormBlock fb;
  if (v.contains("qexp_file")) {
    if (!v.at("qexp_file").is_string()) {
      c.bad_shape(path + ".qexp_file", "expected a string");
      return std::nullopt;
    }
    for (const char* other : {"k", "N", "m", "character", "coefficients"})
      if (v.contains(other)) c.bad_value(path + "." + other, "not allowed together with qexp_file");
    fb.qexp_file = v.at("qexp_file").get<std::string>();
    std::filesystem::path file(*fb.qexp_file);
    if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      c.bad_value(path + ".qexp_file", "cannot read " + *fb.qexp_file);
      return fb;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      fb.form = std::make_shared<const ModFormModP>(read_qexp(ss.str()));
    } catch (const ParseError& e) {
      c.bad_shape(path + ".qexp_file", e.what());
      return fb;
    } catch (const PreconditionError& e) {
      c.bad_value(path + ".qexp_file", e.what());
      return fb;
    }
    fb.k = fb.form->k;
    fb.N = fb.form->N;
    fb.m = fb.form->qexp.field()->degree();
    if (fb.form->p != p) c.bad_value(path + ".qexp_file", "q-expansion is over p = " + std::to_string(fb.form->p));
    return fb;
  }

  const auto k = get_uint(v, "k", path + ".k", c);
  const auto N = get_uint(v, "N", path + ".N", c);
  const auto m = get_uint(v, "m", path + ".m", c);
  auto chr = get_digit_list(v, "character", path + ".character", c);
  auto coeffs = get_digit_list(v, "coefficients", path + ".coefficients", c);
  bool ok = true;
  for (const char* req : {"k", "N", "character", "coefficients"})
    if (!v.contains(req)) {
      c.bad_value(path + "." + req, "required");
      ok = false;
    }
  if (!k || !N || !chr || !coeffs || (v.contains("m") && !m)) return std::nullopt;
  fb.k = static_cast<unsigned>(*k);
  fb.N = *N;
  fb.m = m ? static_cast<unsigned>(*m) : 1;
  fb.character = std::move(*chr);
  fb.coefficients = std::move(*coeffs);
  if (fb.k == 0) {
    c.bad_value(path + ".k", "weight must be positive");
    ok = false;
  }
  if (fb.N == 0 || fb.N > 100000) {
    c.bad_value(path + ".N", "level must be in 1..100000");
    ok = false;
  }
  if (fb.m == 0 || fb.m > 8) {
    c.bad_value(path + ".m", "coefficient degree must be in 1..8");
    ok = false;
  }
  if (ok && fb.character.size() != fb.N) {
    c.bad_value(path + ".character", "expected N = " + std::to_string(fb.N) + " values");
    ok = false;
  }
  if (fb.coefficients.empty()) {
    c.bad_value(path + ".coefficients", "needs at least a_0");
    ok = false;
  }
  const std::size_t before = c.semantic.size();
  if (ok) {
    check_digits(fb.character, p, fb.m, path + ".character", c);
    check_digits(fb.coefficients, p, fb.m, path + ".coefficients", c);
  }
  if (!ok || c.semantic.size() != before || p == 0) return fb;
  try {
    const auto F = FiniteField::make(p, fb.m);
    std::vector<ResidueElement> table, a;
    for (const auto& d : fb.character) table.push_back(to_residue(F, d));
    for (const auto& d : fb.coefficients) a.push_back(to_residue(F, d));
    fb.form = std::make_shared<const ModFormModP>(QExpansion(F, std::move(a)), fb.k, fb.N,
                                                  DirichletCharacter(F, fb.N, std::move(table)));
  } catch (const PreconditionError& e) {
    c.bad_value(path, e.what());
  }
  return fb;
}

json digits_json(const std::vector<DigitVector>& d) {
  json a = json::array();
  for (const auto& v : d) a.push_back(v);
  return a;
}

json form_json(const FormBlock& fb) {
  json o = json::object();
  if (fb.qexp_file) {
    o["qexp_file"] = *fb.qexp_file;
    return o;
  }
  o["k"] = fb.k;
  o["N"] = fb.N;
  o["m"] = fb.m;
  o["character"] = digits_json(fb.character);
  o["coefficients"] = digits_json(fb.coefficients);
  return o;
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::normal_form:
      return "normal-form";
    case Mode::qp_from_q:
      return "qp-from-q";
    case Mode::companion:
      return "companion";
    case Mode::exceptional:
      return "exceptional";
    case Mode::verdict:
      return "verdict";
    case Mode::selftest:
      return "selftest";
  }
  return "selftest";
}

std::optional<Mode> parse_mode(const std::string& s) {
  for (Mode m : {Mode::normal_form, Mode::qp_from_q, Mode::companion, Mode::exceptional, Mode::verdict, Mode::selftest})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

JobError::JobError(std::vector<JobIssue> issues, bool syntax)
    : std::runtime_error(issues.empty() ? std::string("invalid job") : issues.front().path + ": " + issues.front().message),
      issues_(std::move(issues)),
      syntax_(syntax) {}

JobSpec parse_job(const std::string& document, const JobOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw JobError({{"$", std::string("malformed JSON: ") + e.what()}}, true);
  }
  if (!doc.is_object()) throw JobError({{"$", "job document must be a JSON object"}}, true);

  Collector c;
  reject_unknown(doc,
                 {"mode", "p", "n_work", "precision", "descent_degree", "q_digits", "c_gamma", "inner_infty_digits",
                  "uniformizer", "cup_I", "form", "companion_form", "bound"},
                 "", c);
  JobSpec spec;

  // mode
  std::optional<Mode> doc_mode;
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) c.bad_shape("mode", "expected a string");
    else if (!(doc_mode = parse_mode(doc.at("mode").get<std::string>())))
      c.bad_value("mode", "unknown mode '" + doc.at("mode").get<std::string>() + "'");
  }
  if (overrides.mode && doc_mode && *overrides.mode != *doc_mode)
    c.bad_value("mode", std::string("document mode '") + to_string(*doc_mode) + "' does not match the command '" +
                            to_string(*overrides.mode) + "'");
  if (overrides.mode) spec.mode = *overrides.mode;
  else if (doc_mode) spec.mode = *doc_mode;
  else if (!doc.contains("mode")) c.bad_value("mode", "required");

  // p and precision
  const auto p = get_uint(doc, "p", "p", c);
  if (!p) {
    if (!doc.contains("p") && spec.mode != Mode::selftest) c.bad_value("p", "required");
  } else if (*p == 2) {
    c.bad_value("p", "p must be an odd prime (p = 2 is excluded)");
  } else if (!is_prime(*p) || *p > 1000) {
    c.bad_value("p", "p must be an odd prime below 1000");
  } else {
    spec.p = *p;
  }
  const u64 P = spec.p;

  auto prec = get_uint(doc, "precision", "precision", c);
  if (overrides.precision) prec = *overrides.precision;
  if (P != 0) {
    spec.precision = prec ? static_cast<unsigned>(*prec) : static_cast<unsigned>(P + 2);
    if (prec && (*prec < P + 1 || *prec > 4096)) {
      c.bad_value("precision", "precision must be at least p+1 = " + std::to_string(P + 1));
    } else {
      const unsigned K = static_cast<unsigned>((spec.precision + P - 2) / (P - 1)) + 1;
      long double pk = 1;
      for (unsigned i = 0; i < K; ++i) pk *= static_cast<long double>(P);
      if (pk >= 4.6e18L) c.bad_value("precision", "p^K exceeds 62 bits at this precision");
    }
  }

  // forms
  spec.form = parse_form(doc, "form", P, overrides.base_dir, c);
  spec.companion_form = parse_form(doc, "companion_form", P, overrides.base_dir, c);

  // ring-element inputs
  spec.q_digits = get_digit_list(doc, "q_digits", "q_digits", c);
  spec.inner_infty_digits = get_digit_list(doc, "inner_infty_digits", "inner_infty_digits", c);
  if (doc.contains("cup_I")) spec.cup_I = get_digit_vector(doc.at("cup_I"), "cup_I", c);
  if (doc.contains("uniformizer")) {
    if (!doc.at("uniformizer").is_string()) c.bad_shape("uniformizer", "expected a string");
    else spec.uniformizer = doc.at("uniformizer").get<std::string>();
  }
  spec.c_gamma = get_uint(doc, "c_gamma", "c_gamma", c);
  if (auto b = get_uint(doc, "bound", "bound", c)) spec.bound = *b;
  const auto dd = get_uint(doc, "descent_degree", "descent_degree", c);

  // mode-specific required and permitted fields
  const bool q_source = spec.q_digits || doc.contains("q_digits") || doc.contains("c_gamma");
  const bool inv_source = doc.contains("inner_infty_digits") || doc.contains("cup_I") || doc.contains("uniformizer");
  auto require = [&](const char* key) {
    if (!doc.contains(key)) c.bad_value(key, std::string("required in ") + to_string(spec.mode) + " mode");
  };
  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (const char* key : keys)
      if (doc.contains(key)) c.bad_value(key, std::string("not used in ") + to_string(spec.mode) + " mode");
  };
  switch (spec.mode) {
    case Mode::normal_form:
      require("q_digits");
      forbid({"c_gamma", "inner_infty_digits", "cup_I", "uniformizer", "companion_form", "bound", "descent_degree"});
      break;
    case Mode::qp_from_q:
      require("q_digits");
      require("c_gamma");
      forbid({"inner_infty_digits", "cup_I", "uniformizer", "companion_form", "bound"});
      break;
    case Mode::verdict:
      if (q_source && inv_source) {
        c.bad_value("$", "give either q_digits and c_gamma, or inner_infty_digits, cup_I and uniformizer, not both");
      } else if (inv_source) {
        require("inner_infty_digits");
        require("cup_I");
        require("uniformizer");
        forbid({"descent_degree", "form"});
      } else {
        require("q_digits");
        require("c_gamma");
      }
      forbid({"companion_form", "bound"});
      break;
    case Mode::companion:
      require("form");
      require("companion_form");
      forbid({"q_digits", "c_gamma", "inner_infty_digits", "cup_I", "uniformizer", "descent_degree"});
      break;
    case Mode::exceptional:
      require("form");
      forbid({"q_digits", "c_gamma", "inner_infty_digits", "cup_I", "uniformizer", "companion_form", "bound",
              "descent_degree"});
      break;
    case Mode::selftest:
      forbid({"q_digits", "c_gamma", "inner_infty_digits", "cup_I", "uniformizer", "form", "companion_form", "bound",
              "descent_degree"});
      break;
  }

  if (spec.uniformizer && *spec.uniformizer != kUniformizer)
    c.bad_value("uniformizer", std::string("only the uniformizer '") + kUniformizer + "' (π = 1 - ζ_p) is supported");
  if (spec.c_gamma && P != 0 && *spec.c_gamma % P != 1)
    c.bad_value("c_gamma", "c_gamma must be congruent to 1 mod p");

  // descent degree from the form's a_p, else the document, else 1
  const bool q_mode = spec.mode == Mode::qp_from_q || (spec.mode == Mode::verdict && !inv_source);
  if (q_mode) {
    std::optional<unsigned> from_form;
    if (spec.form && spec.form->form) {
      const auto& f = *spec.form->form;
      if (f.qexp.bound() < P) {
        c.bad_value("form.coefficients", "form must reach a_p to fix the descent degree");
      } else {
        const auto& a_p = f.qexp[P];
        if (a_p.is_zero()) c.bad_value("form", "form is not ordinary (a_p = 0)");
        else if (!a_p.in_prime_field()) c.bad_value("form", "a_p must lie in F_p to fix the descent degree");
        else from_form = static_cast<unsigned>(mult_order(a_p.prime_value(), P));
      }
    }
    if (dd && (*dd == 0 || *dd > kMaxNWork)) c.bad_value("descent_degree", "descent degree must be in 1..32");
    if (dd && from_form && *dd != *from_form)
      c.bad_value("descent_degree", "descent degree " + std::to_string(*dd) + " differs from the order " +
                                        std::to_string(*from_form) + " of a_p");
    spec.descent_degree = from_form ? *from_form : (dd ? static_cast<unsigned>(*dd) : 1u);
  }

  // n_work
  auto nw = get_uint(doc, "n_work", "n_work", c);
  if (overrides.n_work) nw = *overrides.n_work;
  if (nw) {
    if (*nw == 0 || *nw > kMaxNWork) c.bad_value("n_work", "n_work must be in 1..32");
    spec.n_work = static_cast<unsigned>(*nw);
  } else if (q_mode && P != 0) {
    spec.n_work = static_cast<unsigned>(std::min<u64>(*spec.descent_degree * P, kMaxNWork));
  } else {
    spec.n_work = 1;
  }
  if (q_mode && spec.descent_degree && spec.n_work % *spec.descent_degree != 0)
    c.bad_value("n_work", "n_work must be a multiple of the descent degree " + std::to_string(*spec.descent_degree));

  if (P != 0) {
    if (spec.q_digits) check_digits(*spec.q_digits, P, spec.n_work, "q_digits", c);
    if (spec.inner_infty_digits) check_digits(*spec.inner_infty_digits, P, spec.n_work, "inner_infty_digits", c);
    if (spec.cup_I) check_digits({*spec.cup_I}, P, spec.n_work, "cup_I", c);
    if (spec.q_digits && spec.q_digits->size() > spec.precision)
      c.bad_value("q_digits", "more digits than the precision " + std::to_string(spec.precision));
    if (spec.inner_infty_digits && spec.inner_infty_digits->size() > spec.precision)
      c.bad_value("inner_infty_digits", "more digits than the precision " + std::to_string(spec.precision));
  }

  if (spec.mode == Mode::companion && spec.form && spec.companion_form && spec.form->form &&
      spec.companion_form->form) {
    const std::size_t lim = std::min(spec.form->form->qexp.bound(), spec.companion_form->form->qexp.bound());
    if (!spec.bound) spec.bound = lim;
    else if (*spec.bound > lim) c.bad_value("bound", "bound exceeds the stored coefficients (" + std::to_string(lim) + ")");
  }

  if (!c.syntax.empty()) throw JobError(std::move(c.syntax), true);
  if (!c.semantic.empty()) throw JobError(std::move(c.semantic), false);
  return spec;
}

std::string emit_job(const JobSpec& spec) {
  json o = json::object();
  o["mode"] = to_string(spec.mode);
  if (spec.p != 0) {
    o["p"] = spec.p;
    o["precision"] = spec.precision;
  }
  o["n_work"] = spec.n_work;
  if (spec.descent_degree) o["descent_degree"] = *spec.descent_degree;
  if (spec.q_digits) o["q_digits"] = digits_json(*spec.q_digits);
  if (spec.c_gamma) o["c_gamma"] = *spec.c_gamma;
  if (spec.inner_infty_digits) o["inner_infty_digits"] = digits_json(*spec.inner_infty_digits);
  if (spec.uniformizer) o["uniformizer"] = *spec.uniformizer;
  if (spec.cup_I) o["cup_I"] = *spec.cup_I;
  if (spec.form) o["form"] = form_json(*spec.form);
  if (spec.companion_form) o["companion_form"] = form_json(*spec.companion_form);
  if (spec.bound) o["bound"] = *spec.bound;
  return o.dump();
}

bool operator==(const JobSpec& a, const JobSpec& b) { return emit_job(a) == emit_job(b); }

std::string fnv1a_hex(const std::string& bytes) {
  u64 h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace exsplit
