#include "krein_cli/run.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "krein/point_interactions.hpp"
#include "krein/segment.hpp"
#include "krein_cli/suites.hpp"

namespace krein::cli {

const char* const kConventionNote =
    "Q(z) has diagonal i*sqrt(z)/(4*pi) with Im sqrt(z) >= 0. A single center of strength alpha > 0 "
    "binds at kappa = 4*pi*alpha, E = -16*pi^2*alpha^2; most of the literature uses the opposite sign "
    "of alpha.";

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// shortest round-trip form, for tolerances written by hand
std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

ordered_json complex_json(cplx v) { return ordered_json::array({v.real(), v.imag()}); }

ordered_json check(double value, double tolerance) {
  return ordered_json{{"max", value}, {"tolerance", tolerance}, {"pass", value <= tolerance}};
}

SegmentModel segment_model(const RunConfig& cfg) {
  return SegmentModel::uniform(cfg.segment.length, *cfg.segment.potential, cfg.segment.nodes);
}

PointModel point_model(const RunConfig& cfg) { return make_point_model(cfg.centers, cfg.w); }

ordered_json model_json(const RunConfig& cfg) {
  ordered_json m{{"kind", to_string(cfg.kind)}};
  switch (cfg.kind) {
    case ModelKind::finite:
      m["max_dim"] = cfg.finite.max_dim;
      m["max_rank"] = cfg.finite.max_rank;
      m["models"] = cfg.finite.models;
      m["energies"] = cfg.finite.energies;
      break;
    case ModelKind::points:
    case ModelKind::lattice:
      m["centers"] = cfg.centers.size();
      break;
    case ModelKind::segment:
      m["l"] = cfg.segment.length;
      m["nodes"] = cfg.segment.nodes;
      m["potential"] = cfg.segment.potential->description();
      break;
  }
  return m;
}

int bound_states_command(const RunConfig& cfg, const std::filesystem::path& out, ordered_json& summary) {
  std::string csv = "kappa,E\n";
  ordered_json levels = ordered_json::array();
  auto row = [&](double kappa, double energy) {
    csv += fmt(kappa) + "," + fmt(energy) + "\n";
    levels.push_back({{"kappa", kappa}, {"E", energy}});
  };
  ordered_json residuals = ordered_json::object();
  if (cfg.kind == ModelKind::segment) {
    for (const SegmentLevel& lv : negative_spectrum(segment_model(cfg), cfg.kappa_lo, cfg.kappa_hi, cfg.scan)) {
      row(lv.kappa, lv.energy);
    }
  } else {
    const PointModel model = point_model(cfg);
    double worst = 0.0;
    for (const BoundState& st : bound_states(model, cfg.kappa_lo, cfg.kappa_hi, cfg.scan)) {
      row(st.kappa, st.energy);
      const Field psi = [&](const Point& x) { return bound_state_wavefunction(model, st, x); };
      for (std::size_t m = 0; m < model.size(); ++m) {
        worst = std::max(worst, boundary_condition_residual(model, psi, m));
      }
    }
    residuals["boundary_condition"] = worst;
  }
  write_file(out / "bound_states.csv", csv);
  summary["kappa_range"] = {cfg.kappa_lo, cfg.kappa_hi};
  summary["levels"] = levels;
  summary["residuals"] = residuals;
  summary["outputs"] = {"bound_states.csv"};
  return kOk;
}

int green_command(const RunConfig& cfg, const std::filesystem::path& out, ordered_json& summary) {
  const Energy& e = cfg.energies.front();
  GridFunction g;
  if (cfg.kind == ModelKind::segment) {
    g = apply_r_l(segment_model(cfg), e, *cfg.source, cfg.grid);
  } else if (cfg.source) {
    g = apply_resolvent(point_model(cfg), e, *cfg.source, cfg.grid);
  } else {
    const PointModel model = point_model(cfg);
    g.points = cfg.grid;
    g.values.resize(cfg.grid.size());
    g.role = "green";
    g.z = e.z();
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) g.values[i] = perturbed_green(model, e, cfg.grid[i], *cfg.pole);
  }
  emit_grid(g, out / "green.csv");
  summary["energy"] = complex_json(e.z());
  summary["role"] = g.role;
  summary["points"] = g.points.size();
  summary["outputs"] = {"green.csv"};
  return kOk;
}

int verify_command(const RunConfig& cfg, const std::filesystem::path& out, ordered_json& summary) {
  const auto& tol = cfg.tolerances;
  ordered_json checks = ordered_json::object();
  ordered_json info = ordered_json::object();
  switch (cfg.kind) {
    case ModelKind::finite: {
      const FiniteSuiteResult r = run_finite_suite(cfg.seed, cfg.finite);
      info["instances"] = r.instances;
      checks["oracle_relative"] = check(r.oracle_relative, tol.at("oracle_relative"));
      checks["hilbert"] = check(r.hilbert, tol.at("hilbert"));
      checks["conjugate_symmetry"] = check(r.conjugate_symmetry, tol.at("conjugate_symmetry"));
      checks["compression_kernel"] = check(r.compression_kernel, tol.at("compression_kernel"));
      checks["compressed_hilbert"] = check(r.compressed_hilbert, tol.at("hilbert"));
      checks["compressed_conjugate_symmetry"] =
          check(r.compressed_conjugate_symmetry, tol.at("conjugate_symmetry"));
      break;
    }
    case ModelKind::points:
    case ModelKind::lattice: {
      const PointSuiteResult r =
          run_point_suite(point_model(cfg), cfg.kappa_lo, cfg.kappa_hi, cfg.scan, cfg.energies, cfg.seed);
      info["bound_states"] = r.states.size();
      checks["boundary_condition"] = check(r.boundary_condition, tol.at("boundary_condition"));
      checks["kernel_symmetry"] = check(r.kernel_symmetry, tol.at("kernel_symmetry"));
      break;
    }
    case ModelKind::segment: {
      const SegmentSuiteResult r = run_segment_suite(segment_model(cfg), cfg.energies);
      info["lambda1"] = r.lambda1;
      info["gstar_g_norm"] = r.gstar_g_norm;
      checks["gstar_g"] = check(r.gstar_g, tol.at("gstar_g"));
      checks["norm_bound_excess"] = check(r.norm_bound_excess, tol.at("norm_bound_excess"));
      checks["conjugate_symmetry"] = check(r.conjugate_symmetry, tol.at("conjugate_symmetry"));
      break;
    }
  }
  bool pass = true;
  std::string csv = "check,max,tolerance,pass\n";
  for (const auto& [name, c] : checks.items()) {
    pass = pass && c["pass"].get<bool>();
    csv += name + "," + fmt(c["max"].get<double>()) + "," + shortest(c["tolerance"].get<double>()) + "," +
           (c["pass"].get<bool>() ? "1" : "0") + "\n";
  }
  write_file(out / "verify.csv", csv);
  summary["info"] = info;
  summary["residuals"] = checks;
  summary["pass"] = pass;
  summary["outputs"] = {"verify.csv"};
  return pass ? kOk : kVerifyFailed;
}

int trace_command(const RunConfig& cfg, const std::filesystem::path& out, ordered_json& summary) {
  const Energy& e = cfg.energies.front();
  const SegmentResolvent resolvent(segment_model(cfg), e);
  const double tol = cfg.tolerances.at("trace_relative");
  std::string csv = "x,rho,re,im,naive_re,naive_im,bracket_re,bracket_im\n";
  GridFunction u_f;
  u_f.role = "trace_u_f";
  u_f.z = e.z();
  ordered_json reports = ordered_json::array();
  bool pass = true;
  for (double x : cfg.trace.x) {
    const TraceReport t = log_boundary_trace(resolvent, *cfg.source, x, cfg.trace.rho);
    for (const TraceSample& s : t.samples) {
      csv += fmt(x) + "," + fmt(s.rho) + "," + fmt(s.field.real()) + "," + fmt(s.field.imag()) + "," +
             fmt(s.naive.real()) + "," + fmt(s.naive.imag()) + "," + fmt(s.bracket.real()) + "," +
             fmt(s.bracket.imag()) + "\n";
    }
    u_f.points.emplace_back(x, 0.0, 0.0);
    u_f.values.push_back(t.u_f);
    pass = pass && t.relative_deviation <= tol;
    reports.push_back({{"x", x},
                       {"u_f", complex_json(t.u_f)},
                       {"u_f_expected", complex_json(t.u_f_expected)},
                       {"relative_deviation", t.relative_deviation},
                       {"stage_difference", t.stage_difference},
                       {"bracket_target", complex_json(t.bracket_target)},
                       {"bracket_rate", t.bracket_rate}});
  }
  write_file(out / "trace.csv", csv);
  emit_grid(u_f, out / "u_f.csv");
  summary["energy"] = complex_json(e.z());
  summary["rho"] = cfg.trace.rho;
  summary["residuals"] = reports;
  summary["pass"] = pass;
  summary["outputs"] = {"trace.csv", "u_f.csv"};
  return kOk;
}

}  // namespace

void emit_grid(const GridFunction& values, const std::filesystem::path& path) {
  if (values.points.empty()) throw ConfigError("grid: empty grid");
  if (values.points.size() != values.values.size()) throw ConfigError("grid: points and values differ in size");
  std::string csv = "x,y,z,re,im\n";
  for (std::size_t i = 0; i < values.points.size(); ++i) {
    const Point& p = values.points[i];
    csv += fmt(p.x()) + "," + fmt(p.y()) + "," + fmt(p.z()) + "," + fmt(values.values[i].real()) + "," +
           fmt(values.values[i].imag()) + "\n";
  }
  write_file(path, csv);
}

int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  ordered_json summary;
  summary["command"] = to_string(config.command);
  summary["model"] = model_json(config);
  summary["seed"] = config.seed;
  summary["convention"] = kConventionNote;
  summary["tolerances"] = config.tolerances;

  int status = kOk;
  switch (config.command) {
    case Command::bound_states: status = bound_states_command(config, out_dir, summary); break;
    case Command::green: status = green_command(config, out_dir, summary); break;
    case Command::verify: status = verify_command(config, out_dir, summary); break;
    case Command::trace: status = trace_command(config, out_dir, summary); break;
  }
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  log << to_string(config.command) << ": wrote " << (out_dir / "summary.json").string()
      << (status == kOk ? "" : " (verification failed)") << "\n";
  return status;
}

}  // namespace krein::cli
