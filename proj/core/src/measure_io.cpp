#include "weightlab/measure_io.hpp"

#include "weightlab/errors.hpp"

#include <fstream>

namespace weightlab {

nlohmann::json measure_to_json(const PiecewiseMeasure& mu) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const Piece& p : mu.pieces()) {
    pieces.push_back({{"a", format_rational(p.interval.a())},
                      {"b", format_rational(p.interval.b())},
                      {"d", format_rational(p.density)}});
  }
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& at : mu.atoms()) {
    atoms.push_back({{"x", format_rational(at.position)}, {"m", format_rational(at.mass)}});
  }
  nlohmann::json j = {{"pieces", std::move(pieces)}, {"atoms", std::move(atoms)}};
  if (mu.approximate()) j["approximate"] = true;
  return j;
}

namespace {

Rational field(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) fail(ErrorCode::Parse, std::string("missing field '") + key + "'");
  const auto& v = obj.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  fail(ErrorCode::Parse, std::string("field '") + key + "' must be a fraction string");
}

}  // namespace

PiecewiseMeasure measure_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorCode::Parse, "measure JSON must be an object");
  std::vector<Piece> pieces;
  if (j.contains("pieces")) {
    for (const auto& p : j.at("pieces")) pieces.push_back({Interval(field(p, "a"), field(p, "b")), field(p, "d")});
  }
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) atoms.push_back({field(a, "x"), field(a, "m")});
  }
  const bool approx = j.contains("approximate") && j.at("approximate").get<bool>();
  return PiecewiseMeasure(std::move(pieces), std::move(atoms), approx);
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorCode::InvalidArgument, "failed writing '" + path.string() + "'");
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, "malformed JSON in '" + path.string() + "': " + e.what());
  }
}

void write_measure_file(const std::filesystem::path& path, const PiecewiseMeasure& mu) {
  write_json_file(path, measure_to_json(mu));
}

PiecewiseMeasure read_measure_file(const std::filesystem::path& path) {
  return measure_from_json(read_json_file(path));
}

}  // namespace weightlab
