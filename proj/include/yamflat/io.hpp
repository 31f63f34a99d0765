#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "yamflat/bifurcation.hpp"
#include "yamflat/tower.hpp"

namespace yamflat {

using Json = nlohmann::ordered_json;

/// Rational entries must be strings ("3/2") or JSON integers; floats are rejected.
Rational rational_from_json(const Json& j);
RationalVector vector_from_json(const Json& j);
/// Rows of the JSON array are matrix rows.
RationalMatrix matrix_from_json(const Json& j);
Json to_json(const RationalVector& v);
Json to_json(const RationalMatrix& m);

/// {"basis": [[...], ...]}: each inner array is one generator.
Lattice lattice_from_json(const Json& j);
Json to_json(const Lattice& lattice);

/// {"lattice": {...}, "holonomy": [{"linear": [[...]], "translation": [...]}, ...]}.
/// A bare lattice object is read as the torus group.
CrystalGroup group_from_json(const Json& j);
Json to_json(const CrystalGroup& group);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest round-trip decimal.
std::string format_double(double x);

Json to_json(const SpectrumSlice& slice);
std::string to_csv(const SpectrumSlice& slice);
/// Custom closed-factor spectra: entries carry exact "eigenvalue" text.
SpectrumSlice spectrum_from_json(const Json& j);

Json to_json(const ScanReport& report);
std::string grid_csv(const ScanReport& report);
Json to_json(const Ledger& ledger);
Json to_json(const AccumulationEvidence& evidence);

struct ScanSpec {
  Rational t_min = ratio(1, 10);
  Rational t_max = 1;
  long steps = 91;
};

struct TowerSpec {
  Real lambda = Real(1);
  std::vector<long> degrees;
};

struct ScenarioFile {
  Scenario scenario;
  ScanSpec scan;
  int precision_bits = kDefaultPrecisionBits;
  std::optional<TowerSpec> tower;
};

/// Group references are resolved relative to `base_dir`.
ScenarioFile scenario_from_json(const Json& j, const std::filesystem::path& base_dir);
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Product data of a scenario: closed factor times its flat factor (scal 0, volume 1).
ProductMetricData product_data(const ScenarioFile& file);

}  // namespace yamflat
