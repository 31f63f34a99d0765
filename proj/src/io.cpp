#include "yamflat/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "yamflat/errors.hpp"

namespace yamflat {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Real real_from_json(const Json& j) {
  if (j.is_string()) return Real::parse(j.get<std::string>());
  if (j.is_number_integer()) return Real(j.get<long>());
  if (j.is_number_float()) return Real(rational_from_decimal_double(j.get<double>()));
  parse_fail("expected a number or an exact string");
}

Rational endpoint_from_json(const Json& j) {
  if (j.is_number_float()) return rational_from_decimal_double(j.get<double>());
  return rational_from_json(j);
}

Json real_json(const Real& x) {
  Json out;
  out["value"] = x.to_double();
  out["exact"] = x.to_string();
  return out;
}

}  // namespace

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  parse_fail("exact data must be an integer or a rational string, got " + j.dump());
}

RationalVector vector_from_json(const Json& j) {
  if (!j.is_array()) parse_fail("expected an array, got " + j.dump());
  RationalVector v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

RationalMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_fail("expected a nonempty array of rows");
  std::vector<RationalVector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r));
  const std::size_t cols = rows[0].size();
  RationalMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) parse_fail("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = rows[i][c];
  }
  return m;
}

Json to_json(const RationalVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

Json to_json(const RationalMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

Lattice lattice_from_json(const Json& j) {
  const Json& b = field(j, "basis");
  if (!b.is_array() || b.empty()) parse_fail("basis must be a nonempty array of generators");
  std::vector<RationalVector> cols;
  for (const auto& g : b) cols.push_back(vector_from_json(g));
  for (const auto& c : cols)
    if (c.size() != cols.size()) throw Error(ErrorCode::InvalidLattice, "basis must have d generators in R^d");
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != cols.size())
    throw Error(ErrorCode::InvalidLattice, "dim does not match the basis");
  return Lattice(RationalMatrix::from_columns(cols));
}

Json to_json(const Lattice& lattice) {
  Json out;
  out["dim"] = lattice.dim();
  Json basis = Json::array();
  for (std::size_t c = 0; c < lattice.dim(); ++c) basis.push_back(to_json(lattice.basis().column(c)));
  out["basis"] = basis;
  return out;
}

CrystalGroup group_from_json(const Json& j) {
  if (!j.contains("holonomy")) {
    if (j.contains("lattice")) return CrystalGroup::torus(lattice_from_json(j.at("lattice")));
    return CrystalGroup::torus(lattice_from_json(j));
  }
  Lattice lattice = lattice_from_json(field(j, "lattice"));
  std::vector<AffineMap> reps;
  for (const auto& h : field(j, "holonomy")) {
    AffineMap g{matrix_from_json(field(h, "linear")), vector_from_json(field(h, "translation"))};
    if (g.linear.rows() != lattice.dim() || g.linear.cols() != lattice.dim() || g.translation.size() != lattice.dim())
      throw Error(ErrorCode::InvalidGroup, "holonomy element has the wrong dimension");
    reps.push_back(std::move(g));
  }
  return CrystalGroup(std::move(lattice), std::move(reps));
}

Json to_json(const CrystalGroup& group) {
  Json out;
  out["lattice"] = to_json(group.lattice());
  Json hol = Json::array();
  for (const auto& g : group.holonomy()) hol.push_back({{"linear", to_json(g.linear)}, {"translation", to_json(g.translation)}});
  out["holonomy"] = hol;
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << text;
}

std::string format_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

Json to_json(const SpectrumSlice& slice) {
  Json out;
  out["source"] = slice.source;
  out["cutoff"] = real_json(slice.cutoff);
  out["certificate"] = slice.certificate;
  Json entries = Json::array();
  for (const auto& e : slice.entries)
    entries.push_back({{"eigenvalue", e.eigenvalue.to_double()}, {"eigenvalue_exact", e.eigenvalue.to_string()},
                       {"multiplicity", e.multiplicity}});
  out["entries"] = entries;
  return out;
}

std::string to_csv(const SpectrumSlice& slice) {
  std::ostringstream os;
  os << "eigenvalue,eigenvalue_exact,multiplicity\n";
  for (const auto& e : slice.entries)
    os << format_double(e.eigenvalue.to_double()) << ',' << e.eigenvalue.to_string() << ',' << e.multiplicity << '\n';
  return os.str();
}

SpectrumSlice spectrum_from_json(const Json& j) {
  SpectrumSlice s;
  const Json& cutoff = field(j, "cutoff");
  s.cutoff = real_from_json(cutoff.is_object() ? field(cutoff, "exact") : cutoff);
  s.source = j.value("source", "custom");
  s.certificate = j.value("certificate", "supplied by the scenario");
  for (const auto& e : field(j, "entries")) {
    const Json& v = e.contains("eigenvalue_exact") ? e.at("eigenvalue_exact") : field(e, "eigenvalue");
    const long m = field(e, "multiplicity").get<long>();
    if (m <= 0) parse_fail("multiplicities must be positive");
    s.entries.push_back({real_from_json(v), m});
  }
  for (std::size_t i = 1; i < s.entries.size(); ++i)
    if (compare(s.entries[i - 1].eigenvalue, s.entries[i].eigenvalue) >= 0)
      throw Error(ErrorCode::InvalidInput, "spectrum entries must be strictly increasing");
  return s;
}

Json to_json(const ScanReport& r) {
  Json out;
  Json grid = Json::array();
  for (const auto& [t, i] : r.grid) grid.push_back(Json::array({to_double(t), i}));
  out["grid"] = grid;
  Json inst = Json::array();
  for (const auto& x : r.instants) {
    Json o;
    o["t_lo"] = to_string(x.t_lo);
    o["t_hi"] = to_string(x.t_hi);
    o["t_approx"] = to_double((x.t_lo + x.t_hi) / 2);
    o["t_exact"] = x.t_exact ? Json(*x.t_exact) : Json(nullptr);
    o["jump"] = x.jump;
    o["condition_a"] = x.condition_a;
    inst.push_back(o);
  }
  out["instants"] = inst;
  out["accumulation"] = {{"monotone_toward_end", r.accumulation.monotone_toward_end},
                         {"index_at_start", r.accumulation.index_at_start},
                         {"index_at_end", r.accumulation.index_at_end}};
  out["warnings"] = r.warnings;
  return out;
}

std::string grid_csv(const ScanReport& r) {
  std::ostringstream os;
  os << "t,t_exact,index\n";
  for (const auto& [t, i] : r.grid) os << format_double(to_double(t)) << ',' << to_string(t) << ',' << i << '\n';
  return os.str();
}

Json to_json(const Ledger& ledger) {
  Json rows = Json::array();
  for (const auto& r : ledger.rows)
    rows.push_back({{"degree", r.degree},
                    {"cumulative_degree", r.cumulative_degree},
                    {"volume", r.volume.to_double()},
                    {"A_value", r.a_value.to_double()},
                    {"crossed", r.crossed}});
  return {{"levels", rows},
          {"first_crossed_level", ledger.first_crossed},
          {"crossed_levels_distinct", ledger.crossed_levels_distinct}};
}

Json to_json(const AccumulationEvidence& ev) {
  Json steps = Json::array();
  for (const auto& s : ev.steps)
    steps.push_back({{"t_lo", to_string(s.instant.t_lo)},
                     {"t_hi", to_string(s.instant.t_hi)},
                     {"t_exact", s.instant.t_exact ? Json(*s.instant.t_exact) : Json(nullptr)},
                     {"index_above", s.index_above},
                     {"index_below", s.index_below},
                     {"lower_bound", s.lower_bound},
                     {"bound_holds", s.bound_holds}});
  return {{"steps", steps}, {"strictly_increasing", ev.strictly_increasing}, {"bounds_hold", ev.bounds_hold}};
}

namespace {

ClosedFactor closed_from_json(const Json& j, const SpectralOptions& so) {
  if (j.contains("sphere")) {
    const Json& s = j.at("sphere");
    const int m = field(s, "dim").get<int>();
    if (s.value("normalize_volume", false)) {
      const Real inv = sphere_volume(m).pow(ratio(2, m));
      return round_sphere(m, inv, Real(static_cast<long>(m) * (m - 1)) * inv * Real(2), so);
    }
    const Real inv = s.contains("inv_radius_sq") ? real_from_json(s.at("inv_radius_sq")) : Real(1);
    return round_sphere(m, inv, Real(static_cast<long>(m) * (m - 1)) * inv * Real(2), so);
  }
  if (j.contains("custom")) {
    const Json& c = j.at("custom");
    ClosedFactor f;
    f.kind = FactorKind::Custom;
    f.dim = field(c, "dim").get<int>();
    f.scal = real_from_json(field(c, "scal"));
    f.volume = real_from_json(field(c, "volume"));
    f.spectrum = spectrum_from_json(field(c, "spectrum"));
    return f;
  }
  parse_fail("closed_factor must hold \"sphere\" or \"custom\"");
}

}  // namespace

ScenarioFile scenario_from_json(const Json& j, const std::filesystem::path& base_dir) {
  ScenarioFile out{Scenario{ClosedFactor{}, CrystalGroup::torus(Lattice::integer(1)), std::nullopt, CollapseEnd::Zero},
                   {}, kDefaultPrecisionBits, std::nullopt};
  if (j.contains("scan")) {
    const Json& s = j.at("scan");
    if (s.contains("t_min")) out.scan.t_min = endpoint_from_json(s.at("t_min"));
    if (s.contains("t_max")) out.scan.t_max = endpoint_from_json(s.at("t_max"));
    if (s.contains("steps")) out.scan.steps = s.at("steps").get<long>();
    if (s.contains("precision_bits")) out.precision_bits = s.at("precision_bits").get<int>();
  }
  if (out.precision_bits < 64) throw Error(ErrorCode::InvalidInput, "precision_bits must be at least 64");
  const SpectralOptions so{out.precision_bits, {}};
  out.scenario.closed = closed_from_json(field(j, "closed_factor"), so);

  const Json& flat = field(j, "flat_factor");
  const Json& g = flat.contains("group") ? flat.at("group") : flat;
  out.scenario.flat = g.is_string() ? group_from_json(read_json_file(base_dir / g.get<std::string>())) : group_from_json(g);

  const Json collapse = j.value("collapse", Json("auto"));
  const Json& mode = collapse.is_object() ? field(collapse, "subspace") : collapse;
  if (collapse.is_object() && collapse.contains("end")) {
    const auto end = collapse.at("end").get<std::string>();
    if (end == "zero") out.scenario.end = CollapseEnd::Zero;
    else if (end == "infinity") out.scenario.end = CollapseEnd::Infinity;
    else parse_fail("collapse end must be \"zero\" or \"infinity\"");
  }
  if (mode.is_string() && mode.get<std::string>() == "auto") {
    out.scenario.projection = find_invariant_subspace(out.scenario.flat);
  } else if (mode.is_string() && mode.get<std::string>() == "none") {
    out.scenario.projection.reset();
  } else if (mode.is_array()) {
    std::vector<RationalVector> span;
    for (const auto& v : mode) span.push_back(vector_from_json(v));
    out.scenario.projection = projection_onto(span);
  } else {
    parse_fail("collapse subspace must be \"auto\", \"none\" or a list of vectors");
  }

  if (j.contains("tower")) {
    TowerSpec t;
    const Json& tj = j.at("tower");
    if (tj.contains("lambda")) t.lambda = real_from_json(tj.at("lambda"));
    if (tj.contains("degrees")) t.degrees = tj.at("degrees").get<std::vector<long>>();
    out.tower = t;
  }
  validate_scenario(out.scenario, out.precision_bits);
  return out;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path), path.parent_path());
}

ProductMetricData product_data(const ScenarioFile& f) {
  const auto& s = f.scenario;
  ProductMetricData p;
  p.scal_g = s.closed.scal;
  p.vol_g = s.closed.volume;
  p.dim_m = s.closed.dim;
  p.scal_h = Real(0);
  p.vol_h = Real(s.flat.lattice().covolume() / Rational(static_cast<long>(s.flat.order())));
  p.dim_f = static_cast<int>(s.flat.dim());
  p.lambda = f.tower ? f.tower->lambda : Real(1);
  return p;
}

}  // namespace yamflat
