#pragma once

#include "weightlab/errors.hpp"
#include "weightlab/rational.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace weightlab {

enum class Provenance { Exact, Quadrature, SampledLower, SampledUpper, Sampled };
std::string_view to_string(Provenance p) noexcept;
Provenance parse_provenance(std::string_view text);

struct Constant {
  std::string name;
  Provenance provenance = Provenance::Exact;
  double value = 0.0;
  double error_bound = 0.0;          // absolute, quadrature only
  std::optional<Rational> exact;     // set when the value is an exact rational
};

struct CertifiedBound {
  std::string name;
  bool lower = true;
  Rational value;
};

enum class Relation { LessEqual, GreaterEqual, Greater, Equal };
std::string_view to_string(Relation r) noexcept;
Relation parse_relation(std::string_view text);

/// constant `relation` bound. Quadrature constants are judged pessimistically
/// (value + err for upper limits, value - err for lower limits); exact pairs are
/// compared in rationals. LessEqual allows bound * (1 + tol).
struct Threshold {
  std::string name;
  std::string constant;
  Relation relation = Relation::LessEqual;
  double bound = 0.0;
  std::optional<Rational> exact_bound;
  double tol = 0.0;
  bool gating = true;  // informational rows do not enter the verdict
  bool pass = false;
  nlohmann::json tags = nlohmann::json::object();  // per-row k, p, depth overrides
};

struct ReportError {
  std::string code;
  std::string message;
  nlohmann::json context = nlohmann::json::object();
};

class VerificationReport {
 public:
  std::string check_name;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<Constant> computed_constants;
  std::vector<CertifiedBound> certified_bounds;
  std::vector<Threshold> thresholds;
  std::vector<ReportError> errors;
  std::vector<std::string> notes;

  Constant& add_exact(const std::string& name, const Rational& value);
  Constant& add_value(const std::string& name, double value, Provenance provenance, double error_bound = 0.0);
  void add_bound(const std::string& name, const Rational& value, bool lower);
  /// Appends a threshold against an existing constant and evaluates it.
  Threshold& require(const std::string& name, const std::string& constant, Relation relation, double bound,
                     double tol = 0.0, nlohmann::json tags = nlohmann::json::object());
  Threshold& require_exact(const std::string& name, const std::string& constant, Relation relation,
                           const Rational& bound, nlohmann::json tags = nlohmann::json::object());
  Threshold& inform(const std::string& name, const std::string& constant, Relation relation, double bound,
                    nlohmann::json tags = nlohmann::json::object());
  void record_error(const Error& e, nlohmann::json context = nlohmann::json::object());

  const Constant* find_constant(const std::string& name) const;
  /// Re-evaluates every threshold from the stored constants; true iff all agree
  /// with the stored verdicts.
  bool consistent() const;
  bool pass() const;

  nlohmann::json to_json() const;
  static VerificationReport from_json(const nlohmann::json& j);
};

bool evaluate(const Threshold& t, const Constant& c);

struct ReportSet {
  std::vector<VerificationReport> reports;
  bool pass() const;
  /// Reports sorted by check name (stable for equal names).
  void sort();
  nlohmann::json to_json() const;
  static ReportSet from_json(const nlohmann::json& j);
};

/// Tidy CSV, one row per threshold: check,k,p,depth,constant,value,bound,pass.
void emit_plotdata(const std::vector<VerificationReport>& reports, std::ostream& out);

}  // namespace weightlab
