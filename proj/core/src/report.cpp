#include "weightlab/report.hpp"

#include <algorithm>
#include <cmath>

namespace weightlab {

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::Exact: return "exact";
    case Provenance::Quadrature: return "quadrature";
    case Provenance::SampledLower: return "sampled lower bound";
    case Provenance::SampledUpper: return "sampled upper bound";
    case Provenance::Sampled: return "sampled";
  }
  return "exact";
}

Provenance parse_provenance(std::string_view text) {
  for (Provenance p : {Provenance::Exact, Provenance::Quadrature, Provenance::SampledLower,
                       Provenance::SampledUpper, Provenance::Sampled}) {
    if (to_string(p) == text) return p;
  }
  fail(ErrorCode::Parse, "unknown provenance '" + std::string(text) + "'");
}

std::string_view to_string(Relation r) noexcept {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Greater: return ">";
    case Relation::Equal: return "==";
  }
  return "<=";
}

Relation parse_relation(std::string_view text) {
  for (Relation r : {Relation::LessEqual, Relation::GreaterEqual, Relation::Greater, Relation::Equal}) {
    if (to_string(r) == text) return r;
  }
  fail(ErrorCode::Parse, "unknown relation '" + std::string(text) + "'");
}

bool evaluate(const Threshold& t, const Constant& c) {
  if (c.exact && t.exact_bound) {
    const Rational& v = *c.exact;
    const Rational& b = *t.exact_bound;
    const Rational slack = abs(b) * from_double(t.tol);
    switch (t.relation) {
      case Relation::LessEqual: return v <= b + slack;
      case Relation::GreaterEqual: return v >= b - slack;
      case Relation::Greater: return v > b;
      case Relation::Equal: return v == b;
    }
    return false;
  }
  const double v = c.value;
  const double e = c.error_bound;
  const double b = t.exact_bound ? to_double(*t.exact_bound) : t.bound;
  const double slack = std::abs(b) * t.tol;
  if (!std::isfinite(v) || !std::isfinite(e)) return false;
  switch (t.relation) {
    case Relation::LessEqual: return v + e <= b + slack;
    case Relation::GreaterEqual: return v - e >= b - slack;
    case Relation::Greater: return v - e > b;
    case Relation::Equal: return std::abs(v - b) <= e + slack;
  }
  return false;
}

Constant& VerificationReport::add_exact(const std::string& name, const Rational& value) {
  Constant c;
  c.name = name;
  c.provenance = Provenance::Exact;
  c.value = to_double(value);
  c.exact = value;
  computed_constants.push_back(std::move(c));
  return computed_constants.back();
}

Constant& VerificationReport::add_value(const std::string& name, double value, Provenance provenance,
                                        double error_bound) {
  computed_constants.push_back(Constant{name, provenance, value, error_bound, std::nullopt});
  return computed_constants.back();
}

void VerificationReport::add_bound(const std::string& name, const Rational& value, bool lower) {
  certified_bounds.push_back(CertifiedBound{name, lower, value});
}

const Constant* VerificationReport::find_constant(const std::string& name) const {
  for (const Constant& c : computed_constants) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Threshold& VerificationReport::require(const std::string& name, const std::string& constant, Relation relation,
                                       double bound, double tol, nlohmann::json tags) {
  const Constant* c = find_constant(constant);
  if (c == nullptr) fail(ErrorCode::InvalidArgument, "threshold '" + name + "' refers to unknown constant " + constant);
  Threshold t;
  t.name = name;
  t.constant = constant;
  t.relation = relation;
  t.bound = bound;
  t.tol = tol;
  t.tags = std::move(tags);
  t.pass = evaluate(t, *c);
  thresholds.push_back(std::move(t));
  return thresholds.back();
}

Threshold& VerificationReport::require_exact(const std::string& name, const std::string& constant,
                                             Relation relation, const Rational& bound, nlohmann::json tags) {
  Threshold& t = require(name, constant, relation, to_double(bound), 0.0, std::move(tags));
  t.exact_bound = bound;
  t.pass = evaluate(t, *find_constant(constant));
  return t;
}

Threshold& VerificationReport::inform(const std::string& name, const std::string& constant, Relation relation,
                                      double bound, nlohmann::json tags) {
  Threshold& t = require(name, constant, relation, bound, 0.0, std::move(tags));
  t.gating = false;
  return t;
}

void VerificationReport::record_error(const Error& e, nlohmann::json context) {
  errors.push_back(ReportError{std::string(to_string(e.code())), e.what(), std::move(context)});
}

bool VerificationReport::consistent() const {
  for (const Threshold& t : thresholds) {
    const Constant* c = find_constant(t.constant);
    if (c == nullptr || evaluate(t, *c) != t.pass) return false;
  }
  return true;
}

bool VerificationReport::pass() const {
  if (!errors.empty()) return false;
  bool any = false;
  for (const Threshold& t : thresholds) {
    if (!t.gating) continue;
    any = true;
    if (!t.pass) return false;
  }
  return any;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json constants = nlohmann::json::array();
  for (const Constant& c : computed_constants) {
    nlohmann::json j = {{"name", c.name}, {"value", c.value}, {"provenance", to_string(c.provenance)}};
    if (c.provenance == Provenance::Quadrature) j["error_bound"] = c.error_bound;
    if (c.exact) j["exact"] = format_rational(*c.exact);
    constants.push_back(std::move(j));
  }
  nlohmann::json bounds = nlohmann::json::array();
  for (const CertifiedBound& b : certified_bounds) {
    bounds.push_back({{"name", b.name},
                      {"kind", b.lower ? "lower" : "upper"},
                      {"value", format_rational(b.value)},
                      {"approx", to_double(b.value)}});
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const Threshold& t : thresholds) {
    nlohmann::json j = {{"name", t.name},       {"constant", t.constant}, {"relation", to_string(t.relation)},
                        {"bound", t.bound},     {"tol", t.tol},           {"gating", t.gating},
                        {"pass", t.pass}};
    if (t.exact_bound) j["exact_bound"] = format_rational(*t.exact_bound);
    if (!t.tags.empty()) j["tags"] = t.tags;
    rows.push_back(std::move(j));
  }
  nlohmann::json errs = nlohmann::json::array();
  for (const ReportError& e : errors) {
    errs.push_back({{"code", e.code}, {"message", e.message}, {"context", e.context}});
  }
  return {{"check", check_name},
          {"parameters", parameters},
          {"computed_constants", std::move(constants)},
          {"certified_bounds", std::move(bounds)},
          {"thresholds", std::move(rows)},
          {"errors", std::move(errs)},
          {"notes", notes},
          {"pass", pass()}};
}

VerificationReport VerificationReport::from_json(const nlohmann::json& j) {
  try {
    VerificationReport r;
    r.check_name = j.at("check").get<std::string>();
    r.parameters = j.at("parameters");
    for (const auto& c : j.at("computed_constants")) {
      Constant k;
      k.name = c.at("name").get<std::string>();
      k.value = c.at("value").is_null() ? NAN : c.at("value").get<double>();
      k.provenance = parse_provenance(c.at("provenance").get<std::string>());
      k.error_bound = c.value("error_bound", 0.0);
      if (c.contains("exact")) k.exact = parse_rational(c.at("exact").get<std::string>());
      r.computed_constants.push_back(std::move(k));
    }
    for (const auto& b : j.at("certified_bounds")) {
      r.certified_bounds.push_back(CertifiedBound{b.at("name").get<std::string>(), b.at("kind") == "lower",
                                                  parse_rational(b.at("value").get<std::string>())});
    }
    for (const auto& t : j.at("thresholds")) {
      Threshold h;
      h.name = t.at("name").get<std::string>();
      h.constant = t.at("constant").get<std::string>();
      h.relation = parse_relation(t.at("relation").get<std::string>());
      h.bound = t.at("bound").get<double>();
      h.tol = t.at("tol").get<double>();
      h.gating = t.at("gating").get<bool>();
      h.pass = t.at("pass").get<bool>();
      if (t.contains("exact_bound")) h.exact_bound = parse_rational(t.at("exact_bound").get<std::string>());
      if (t.contains("tags")) h.tags = t.at("tags");
      r.thresholds.push_back(std::move(h));
    }
    for (const auto& e : j.at("errors")) {
      r.errors.push_back(ReportError{e.at("code").get<std::string>(), e.at("message").get<std::string>(),
                                     e.value("context", nlohmann::json::object())});
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("malformed report: ") + e.what());
  }
}

bool ReportSet::pass() const {
  return !reports.empty() && std::all_of(reports.begin(), reports.end(), [](const VerificationReport& r) { return r.pass(); });
}

void ReportSet::sort() {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const VerificationReport& a, const VerificationReport& b) { return a.check_name < b.check_name; });
}

nlohmann::json ReportSet::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const VerificationReport& r : reports) arr.push_back(r.to_json());
  return {{"reports", std::move(arr)}, {"pass", pass()}};
}

ReportSet ReportSet::from_json(const nlohmann::json& j) {
  ReportSet set;
  if (j.is_object() && j.contains("reports")) {
    for (const auto& r : j.at("reports")) set.reports.push_back(VerificationReport::from_json(r));
  } else if (j.is_array()) {
    for (const auto& r : j) set.reports.push_back(VerificationReport::from_json(r));
  } else {
    set.reports.push_back(VerificationReport::from_json(j));
  }
  return set;
}

namespace {

std::string cell(const nlohmann::json& tags, const nlohmann::json& params, const char* key) {
  const nlohmann::json* v = nullptr;
  if (tags.contains(key)) v = &tags.at(key);
  else if (params.contains(key)) v = &params.at(key);
  if (v == nullptr || v->is_null()) return "";
  if (v->is_string()) return v->get<std::string>();
  if (v->is_array()) {
    std::string s;
    for (const auto& e : *v) s += (s.empty() ? "" : ";") + (e.is_string() ? e.get<std::string>() : e.dump());
    return s;
  }
  return v->dump();
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void emit_plotdata(const std::vector<VerificationReport>& reports, std::ostream& out) {
  out << "check,k,p,depth,constant,value,bound,pass\n";
  for (const VerificationReport& r : reports) {
    for (const Threshold& t : r.thresholds) {
      const Constant* c = r.find_constant(t.constant);
      nlohmann::json value = c ? nlohmann::json(c->value) : nlohmann::json();
      out << quoted(r.check_name) << ',' << quoted(cell(t.tags, r.parameters, "k")) << ','
          << quoted(cell(t.tags, r.parameters, "p")) << ',' << quoted(cell(t.tags, r.parameters, "depth")) << ','
          << quoted(t.name) << ',' << value.dump() << ',' << nlohmann::json(t.bound).dump() << ','
          << (t.pass ? "true" : "false") << '\n';
    }
  }
}

}  // namespace weightlab
