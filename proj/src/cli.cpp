#include "yamflat/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

#include "yamflat/errors.hpp"
#include "yamflat/io.hpp"

namespace yamflat {

namespace {

struct Global {
  int precision_bits = kDefaultPrecisionBits;
  std::string output_dir = ".";
  std::string format = "both";
  unsigned threads = 1;
};

struct Emitter {
  const Global& g;
  std::ostream& out;

  bool csv() const { return g.format != "json"; }
  bool json() const { return g.format != "csv"; }
  std::filesystem::path path(const std::string& name) const { return std::filesystem::path(g.output_dir) / name; }

  void write_json(const std::string& name, const Json& j) const {
    write_text_file(path(name), j.dump(2) + "\n");
    out << "wrote " << path(name).string() << "\n";
  }
  void write_csv(const std::string& name, const std::string& text) const {
    write_text_file(path(name), text);
    out << "wrote " << path(name).string() << "\n";
  }
};

Lattice lattice_arg(const std::string& spec) {
  if (spec.rfind("identity", 0) == 0) {
    const std::string rest = spec.substr(8);
    if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCode::InvalidInput, "expected identityD or a lattice file, got " + spec);
    return Lattice::integer(std::stoul(rest));
  }
  const Json j = read_json_file(spec);
  return j.contains("lattice") ? lattice_from_json(j.at("lattice")) : lattice_from_json(j);
}

Real cutoff_arg(const std::string& text) { return Real::parse(text); }

void print_spectrum(std::ostream& out, const SpectrumSlice& s) {
  out << s.source << "\n" << std::left << std::setw(24) << "eigenvalue" << std::setw(24) << "exact" << "multiplicity\n";
  for (const auto& e : s.entries)
    out << std::setw(24) << format_double(e.eigenvalue.to_double()) << std::setw(24) << e.eigenvalue.to_string()
        << e.multiplicity << "\n";
}

void emit_spectrum(const Emitter& em, const SpectrumSlice& s) {
  print_spectrum(em.out, s);
  if (em.csv()) em.write_csv("spectrum.csv", to_csv(s));
  if (em.json()) em.write_json("spectrum.json", to_json(s));
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UndecidableComparison: return 3;
    case ErrorCode::GridTooCoarse:
    case ErrorCode::BudgetExhausted: return 4;
    default: return 2;
  }
}

BifurcationOptions bif_options(const Global& g, const ScenarioFile& f) {
  BifurcationOptions o;
  o.precision_bits = std::max(g.precision_bits, f.precision_bits);
  o.threads = g.threads;
  return o;
}

struct ScanOverrides {
  std::string scenario;
  std::string t_min, t_max;
  long steps = 0;

  ScanSpec apply(const ScanSpec& base) const {
    ScanSpec s = base;
    if (!t_min.empty()) s.t_min = parse_rational(t_min);
    if (!t_max.empty()) s.t_max = parse_rational(t_max);
    if (steps > 0) s.steps = steps;
    return s;
  }
};

void add_scan_options(CLI::App* cmd, ScanOverrides& o) {
  cmd->add_option("--scenario", o.scenario, "scenario JSON file")->required();
  cmd->add_option("--t-min", o.t_min, "override scan start");
  cmd->add_option("--t-max", o.t_max, "override scan end");
  cmd->add_option("--steps", o.steps, "override grid size");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified spectra, Morse-index scans and covering towers for products with flat factors"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--precision-bits", g.precision_bits, "interval precision for comparisons")
      ->check(CLI::Range(64, 1 << 20));
  app.add_option("--output-dir", g.output_dir, "directory for CSV/JSON output");
  app.add_option("--format", g.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--threads", g.threads, "worker threads for grid evaluation")->check(CLI::Range(1u, 1024u));

  auto* spectrum = app.add_subcommand("spectrum", "Laplace spectrum below a cutoff");
  spectrum->require_subcommand(1);
  std::string basis, group_file, cutoff, inv_radius_sq, matrix_file, subspace = "auto", t_text;
  int dim = 0;
  bool unit_volume = false;
  auto* sp_torus = spectrum->add_subcommand("torus", "flat torus R^d / L");
  sp_torus->add_option("--basis", basis, "identityD or lattice JSON")->required();
  sp_torus->add_option("--cutoff", cutoff)->required();
  auto* sp_sphere = spectrum->add_subcommand("sphere", "round sphere");
  sp_sphere->add_option("--dim", dim)->required();
  sp_sphere->add_flag("--unit-volume", unit_volume);
  sp_sphere->add_option("--inv-radius-sq", inv_radius_sq, "1/R^2 (default 1)");
  sp_sphere->add_option("--cutoff", cutoff)->required();
  auto* sp_quot = spectrum->add_subcommand("quotient", "closed flat manifold R^d / G");
  sp_quot->add_option("--group", group_file)->required();
  sp_quot->add_option("--cutoff", cutoff)->required();

  auto* collapse = app.add_subcommand("collapse", "collapse map A_t and the conjugated group");
  collapse->add_option("--group", group_file)->required();
  collapse->add_option("--subspace", subspace, "auto or a JSON file with spanning vectors");
  collapse->add_option("--t", t_text)->required();

  ScanOverrides scan_o;
  auto* index_scan = app.add_subcommand("index-scan", "Morse index on a grid");
  add_scan_options(index_scan, scan_o);
  auto* bifurcate = app.add_subcommand("bifurcate", "index scan with certified bifurcation instants");
  add_scan_options(bifurcate, scan_o);
  long accumulation = 0;
  bifurcate->add_option("--accumulation", accumulation, "also trace the first K instants toward the collapse end");

  auto* tower = app.add_subcommand("tower", "covering tower ledger and minimal forcing degree");
  std::string tower_scenario, lambda_text;
  std::vector<long> degrees;
  tower->add_option("--scenario", tower_scenario)->required();
  tower->add_option("--degrees", degrees)->delimiter(',');
  tower->add_option("--lambda", lambda_text);

  auto* check = app.add_subcommand("check", "verdicts: cheng, torsion, cone");
  check->require_subcommand(1);
  long j_max = 10;
  auto* ck_cheng = check->add_subcommand("cheng", "eigenvalue upper bound against the diameter");
  ck_cheng->add_option("--basis", basis, "identityD or lattice JSON");
  ck_cheng->add_option("--group", group_file, "flat manifold group JSON");
  ck_cheng->add_option("--j-max", j_max);
  auto* ck_torsion = check->add_subcommand("torsion", "torsion-freeness");
  ck_torsion->add_option("--group", group_file)->required();
  auto* ck_cone = check->add_subcommand("cone", "A^t A commutes with the holonomy");
  ck_cone->add_option("--group", group_file)->required();
  ck_cone->add_option("--matrix", matrix_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Emitter em{g, out};
  const SpectralOptions so{g.precision_bits, {}};
  try {
    if (sp_torus->parsed()) {
      emit_spectrum(em, torus_spectrum(lattice_arg(basis), cutoff_arg(cutoff), so));
    } else if (sp_sphere->parsed()) {
      const Real inv = unit_volume ? sphere_volume(dim).pow(ratio(2, dim))
                                   : (inv_radius_sq.empty() ? Real(1) : Real::parse(inv_radius_sq));
      emit_spectrum(em, sphere_spectrum(dim, inv, cutoff_arg(cutoff), so));
    } else if (sp_quot->parsed()) {
      emit_spectrum(em, bieberbach_spectrum(group_from_json(read_json_file(group_file)), cutoff_arg(cutoff), so));
    } else if (collapse->parsed()) {
      const CrystalGroup group = group_from_json(read_json_file(group_file));
      const RationalMatrix p = subspace == "auto" ? find_invariant_subspace(group) : [&] {
        std::vector<RationalVector> span;
        for (const auto& v : read_json_file(subspace)) span.push_back(vector_from_json(v));
        return projection_onto(span);
      }();
      const CollapseFamily family(group, p);
      const Rational t = parse_rational(t_text);
      const RationalMatrix a = collapse_map(family, t);
      const CrystalGroup conj = conjugate_group(group, a, RationalVector(group.dim()));
      const auto report = validate_group(conj);
      Json j;
      j["t"] = to_string(t);
      j["projection"] = to_json(p);
      j["dim_e"] = family.dim_e();
      j["A_t"] = to_json(a);
      j["det"] = to_string(a.determinant());
      j["cone_membership"] = cone_membership(group, a);
      j["conjugated_group"] = to_json(conj);
      j["conjugated_group_valid"] = report.valid();
      out << "A_t = " << a.to_string() << "\ndet = " << to_string(a.determinant())
          << "\nconjugated group valid: " << (report.valid() ? "yes" : "no") << "\n";
      em.write_json("collapse.json", j);
      return report.valid() ? 0 : 2;
    } else if (index_scan->parsed() || bifurcate->parsed()) {
      const ScenarioFile f = load_scenario(scan_o.scenario);
      const ScanSpec spec = scan_o.apply(f.scan);
      const BifurcationOptions o = bif_options(g, f);
      if (index_scan->parsed()) {
        std::vector<Rational> ts(static_cast<std::size_t>(std::max(spec.steps, 2L)));
        ScanReport r;
        for (std::size_t i = 0; i < ts.size(); ++i) {
          const Rational t = spec.t_min + (spec.t_max - spec.t_min) * ratio(static_cast<long>(i), static_cast<long>(ts.size() - 1));
          r.grid.emplace_back(t, index_at(f.scenario, t, o).index);
        }
        for (const auto& [t, i] : r.grid) out << format_double(to_double(t)) << "\t" << i << "\n";
        if (em.csv()) em.write_csv("grid.csv", grid_csv(r));
        if (em.json()) {
          Json j;
          j["grid"] = to_json(r)["grid"];
          em.write_json("index_scan.json", j);
        }
        return 0;
      }
      const ScanReport r = scan(f.scenario, spec.t_min, spec.t_max, spec.steps, o);
      out << "threshold " << f.scenario.threshold().to_string() << "; " << r.instants.size() << " instants\n";
      for (const auto& x : r.instants)
        out << "  t in [" << format_double(to_double(x.t_lo)) << ", " << format_double(to_double(x.t_hi))
            << "] jump " << x.jump << " condition_a " << (x.condition_a ? "ok" : "fails")
            << (x.t_exact ? "  t = " + *x.t_exact : "") << "\n";
      for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
      if (em.csv()) em.write_csv("grid.csv", grid_csv(r));
      if (em.json()) em.write_json("scan.json", to_json(r));
      if (accumulation > 0) em.write_json("accumulation.json", to_json(accumulation_diagnostic(f.scenario, accumulation, 1, o)));
      return 0;
    } else if (tower->parsed()) {
      ScenarioFile f = load_scenario(tower_scenario);
      if (!f.tower) f.tower = TowerSpec{};
      if (!lambda_text.empty()) f.tower->lambda = Real::parse(lambda_text);
      if (!degrees.empty()) f.tower->degrees = degrees;
      const ProductMetricData p = product_data(f);
      const int bits = std::max(g.precision_bits, f.precision_bits);
      const ForcingDegree fd = minimal_forcing_degree(p, bits);
      const Ledger ledger = tower_simulate(p, f.tower->degrees, bits);
      out << "A = " << hilbert_einstein_value(p, bits).to_string() << "  Y(S^" << p.n()
          << ") ~ " << format_double(sphere_yamabe_threshold(p.n()).to_double()) << "\n"
          << "minimal forcing degree " << fd.degree << (fd.equality_previous ? " (equality at the previous degree)" : "")
          << "\nlevel  degree  cumulative  volume  A  crossed\n";
      for (std::size_t i = 0; i < ledger.rows.size(); ++i) {
        const auto& r = ledger.rows[i];
        out << i + 1 << "  " << r.degree << "  " << r.cumulative_degree << "  " << format_double(r.volume.to_double())
            << "  " << format_double(r.a_value.to_double()) << "  " << (r.crossed ? "yes" : "no") << "\n";
      }
      Json j = to_json(ledger);
      j["A"] = hilbert_einstein_value(p, bits).to_double();
      j["Y_sphere"] = sphere_yamabe_threshold(p.n()).to_double();
      j["minimal_forcing_degree"] = fd.degree;
      j["equality_at_previous_degree"] = fd.equality_previous;
      j["margin"] = fd.margin.to_double();
      j["margin_previous"] = fd.margin_previous.to_double();
      if (em.json()) em.write_json("ledger.json", j);
      if (em.csv()) {
        std::ostringstream os;
        os << "level,degree,cumulative_degree,volume,A_value,crossed\n";
        for (std::size_t i = 0; i < ledger.rows.size(); ++i) {
          const auto& r = ledger.rows[i];
          os << i + 1 << ',' << r.degree << ',' << r.cumulative_degree << ',' << format_double(r.volume.to_double()) << ','
             << format_double(r.a_value.to_double()) << ',' << (r.crossed ? "true" : "false") << '\n';
        }
        em.write_csv("ledger.csv", os.str());
      }
      return 0;
    } else if (ck_cheng->parsed()) {
      if (basis.empty() == group_file.empty()) throw Error(ErrorCode::InvalidInput, "give exactly one of --basis, --group");
      const CrystalGroup group = basis.empty() ? group_from_json(read_json_file(group_file)) : CrystalGroup::torus(lattice_arg(basis));
      const FlatDiameter diam = flat_diameter(group, 1e-9);
      // Cheng's bound itself caps lambda_{j_max}; twice it is a safe cutoff.
      const double cap = 4.0 * static_cast<double>(j_max * j_max) * group.dim() * (group.dim() + 4) / (diam.value * diam.value);
      const SpectrumSlice s = bieberbach_spectrum(group, Real(rational_from_decimal_double(cap)) + Real(PiPolynomial(40, 2)), so);
      const ChengReport rep = cheng_bound_check(s, static_cast<int>(group.dim()), diam.value, j_max, !diam.upper_bound_only, so);
      Json rows = Json::array();
      for (const auto& r : rep.rows) {
        const char* st = r.status == BoundStatus::Satisfied ? "satisfied" : r.status == BoundStatus::Violated ? "violated" : "inconclusive";
        rows.push_back({{"j", r.j}, {"eigenvalue", r.eigenvalue.to_double()}, {"eigenvalue_exact", r.eigenvalue.to_string()},
                        {"bound", r.bound}, {"margin", r.margin}, {"status", st}});
        out << "j=" << r.j << " lambda=" << format_double(r.eigenvalue.to_double()) << " bound=" << format_double(r.bound)
            << " " << st << "\n";
      }
      em.write_json("cheng.json", {{"diameter", diam.value}, {"diameter_upper_bound_only", diam.upper_bound_only},
                                   {"rows", rows}, {"violations", rep.violations}, {"inconclusive", rep.inconclusive}});
      return rep.violations == 0 ? 0 : 1;
    } else if (ck_torsion->parsed()) {
      const CrystalGroup group = group_from_json(read_json_file(group_file));
      const TorsionVerdict v = is_torsion_free(group);
      Json j{{"torsion_free", v.torsion_free}};
      if (!v.torsion_free) {
        j["coset"] = *v.coset;
        j["element"] = {{"linear", to_json(v.element->linear)}, {"translation", to_json(v.element->translation)}};
        j["fixed_point"] = to_json(*v.fixed_point);
      }
      out << (v.torsion_free ? "torsion free" : "has torsion: coset " + std::to_string(*v.coset)) << "\n";
      em.write_json("torsion.json", j);
      return v.torsion_free ? 0 : 1;
    } else if (ck_cone->parsed()) {
      const CrystalGroup group = group_from_json(read_json_file(group_file));
      const Json mj = read_json_file(matrix_file);
      const RationalMatrix a = matrix_from_json(mj.contains("matrix") ? mj.at("matrix") : mj);
      const bool member = cone_membership(group, a);
      out << (member ? "in the cone" : "not in the cone") << "\n";
      em.write_json("cone.json", {{"member", member}, {"matrix", to_json(a)}});
      return member ? 0 : 1;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "ParseError: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"yamflat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace yamflat
