#include "krein_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "krein/errors.hpp"

namespace krein::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path.empty() ? key : path + "." + key, "missing field");
  return obj.at(key);
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) fail(path, "must be positive");
  return x;
}

int count(const json& v, const std::string& path, int min) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  const auto n = v.get<long long>();
  if (n < min || n > 1'000'000) fail(path, "must lie in [" + std::to_string(min) + ", 1000000]");
  return static_cast<int>(n);
}

std::vector<double> numbers(const json& v, const std::string& path, std::size_t min_size = 0) {
  if (!v.is_array()) fail(path, "expected an array");
  if (v.size() < min_size) fail(path, "needs at least " + std::to_string(min_size) + " entries");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Point point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) fail(path, "expected [x, y, z]");
  const auto c = numbers(v, path);
  return {c[0], c[1], c[2]};
}

cplx complex_number(const json& v, const std::string& path) {
  if (v.is_array()) {
    if (v.size() != 2) fail(path, "expected a number or [re, im]");
    const auto c = numbers(v, path);
    return {c[0], c[1]};
  }
  return {number(v, path), 0.0};
}

/// A number, [re, im], or {"kappa": k} for z = -k^2.
Energy energy(const json& v, const std::string& path) {
  if (v.is_object()) {
    allow_keys(v, path, {"kappa"});
    return Energy::from_kappa(positive(require(v, path, "kappa"), join(path, "kappa")));
  }
  return Energy(complex_number(v, path));
}

std::vector<Point> grid(const json& v, const std::string& path) {
  if (!v.is_object() || v.size() != 1) fail(path, "expected exactly one of points, plane, box");
  std::vector<Point> out;
  if (v.contains("points")) {
    const json& pts = v.at("points");
    const std::string p = join(path, "points");
    if (!pts.is_array()) fail(p, "expected an array of [x, y, z]");
    for (std::size_t i = 0; i < pts.size(); ++i) out.push_back(point(pts[i], p + "[" + std::to_string(i) + "]"));
  } else if (v.contains("plane")) {
    const json& g = v.at("plane");
    const std::string p = join(path, "plane");
    allow_keys(g, p, {"origin", "u", "v", "n"});
    const Point origin = point(require(g, p, "origin"), join(p, "origin"));
    const Point u = point(require(g, p, "u"), join(p, "u"));
    const Point w = point(require(g, p, "v"), join(p, "v"));
    const json& n = require(g, p, "n");
    if (!n.is_array() || n.size() != 2) fail(join(p, "n"), "expected [nu, nv]");
    const int nu = count(n[0], join(p, "n") + "[0]", 1);
    const int nv = count(n[1], join(p, "n") + "[1]", 1);
    for (int j = 0; j < nv; ++j) {
      for (int i = 0; i < nu; ++i) {
        const double s = nu > 1 ? double(i) / (nu - 1) : 0.0;
        const double t = nv > 1 ? double(j) / (nv - 1) : 0.0;
        out.push_back(origin + s * u + t * w);
      }
    }
  } else if (v.contains("box")) {
    const json& g = v.at("box");
    const std::string p = join(path, "box");
    allow_keys(g, p, {"min", "max", "n"});
    const Point lo = point(require(g, p, "min"), join(p, "min"));
    const Point hi = point(require(g, p, "max"), join(p, "max"));
    const json& n = require(g, p, "n");
    if (!n.is_array() || n.size() != 3) fail(join(p, "n"), "expected [nx, ny, nz]");
    int dims[3];
    for (int a = 0; a < 3; ++a) dims[a] = count(n[a], join(p, "n") + "[" + std::to_string(a) + "]", 1);
    auto coord = [&](int axis, int i) {
      return dims[axis] > 1 ? lo[axis] + (hi[axis] - lo[axis]) * i / (dims[axis] - 1) : lo[axis];
    };
    for (int k = 0; k < dims[2]; ++k) {
      for (int j = 0; j < dims[1]; ++j) {
        for (int i = 0; i < dims[0]; ++i) out.emplace_back(coord(0, i), coord(1, j), coord(2, k));
      }
    }
  } else {
    fail(path, "expected exactly one of points, plane, box");
  }
  if (out.empty()) fail(path, "grid is empty");
  return out;
}

RadialSource source(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  const json& kind = require(v, path, "kind");
  const Point center = point(require(v, path, "center"), join(path, "center"));
  const double sigma = positive(require(v, path, "sigma"), join(path, "sigma"));
  if (kind == "gaussian") {
    allow_keys(v, path, {"kind", "center", "sigma", "mass"});
    const double mass = v.contains("mass") ? number(v.at("mass"), join(path, "mass")) : 1.0;
    return RadialSource::gaussian(center, sigma, mass);
  }
  if (kind == "helmholtz_image") {
    allow_keys(v, path, {"kind", "center", "sigma", "shift", "amplitude"});
    const cplx shift = complex_number(require(v, path, "shift"), join(path, "shift"));
    const double amp = v.contains("amplitude") ? number(v.at("amplitude"), join(path, "amplitude")) : 1.0;
    return RadialSource::helmholtz_image(center, sigma, shift, amp);
  }
  fail(join(path, "kind"), "expected gaussian or helmholtz_image");
}

Potential potential(const json& v, const std::string& path) {
  if (!v.is_object() || v.size() != 1) fail(path, "expected exactly one of constant, polynomial, tabulated");
  if (v.contains("constant")) return Potential::constant(number(v.at("constant"), join(path, "constant")));
  if (v.contains("polynomial")) {
    return Potential::polynomial(numbers(v.at("polynomial"), join(path, "polynomial"), 1));
  }
  if (v.contains("tabulated")) {
    const json& t = v.at("tabulated");
    const std::string p = join(path, "tabulated");
    allow_keys(t, p, {"x", "v"});
    auto xs = numbers(require(t, p, "x"), join(p, "x"), 2);
    auto vs = numbers(require(t, p, "v"), join(p, "v"), 2);
    try {
      return Potential::tabulated(std::move(xs), std::move(vs));
    } catch (const krein::Error& e) {
      fail(p, e.what());
    }
  }
  fail(path, "expected exactly one of constant, polynomial, tabulated");
}

CMatrix coupling_matrix(const json& v, const std::string& path, std::size_t n) {
  if (!v.is_array() || v.size() != n) fail(path, "expected " + std::to_string(n) + " rows");
  CMatrix w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != n) fail(row, "expected " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) {
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          complex_number(v[i][j], row + "[" + std::to_string(j) + "]");
    }
  }
  return w;
}

void parse_model(const json& m, RunConfig& cfg) {
  const std::string path = "model";
  if (!m.is_object()) fail(path, "expected an object");
  const json& kind = require(m, path, "kind");
  if (kind == "finite") {
    cfg.kind = ModelKind::finite;
    allow_keys(m, path, {"kind", "max_dim", "max_rank", "models", "energies"});
    if (m.contains("max_dim")) cfg.finite.max_dim = count(m.at("max_dim"), "model.max_dim", 2);
    if (m.contains("max_rank")) cfg.finite.max_rank = count(m.at("max_rank"), "model.max_rank", 1);
    if (m.contains("models")) cfg.finite.models = count(m.at("models"), "model.models", 1);
    if (m.contains("energies")) cfg.finite.energies = count(m.at("energies"), "model.energies", 1);
  } else if (kind == "points") {
    cfg.kind = ModelKind::points;
    allow_keys(m, path, {"kind", "centers", "alphas", "w"});
    const json& c = require(m, path, "centers");
    if (!c.is_array() || c.empty()) fail("model.centers", "expected a nonempty array of [x, y, z]");
    for (std::size_t i = 0; i < c.size(); ++i) cfg.centers.push_back(point(c[i], "model.centers[" + std::to_string(i) + "]"));
    if (m.contains("alphas") == m.contains("w")) fail(path, "expected exactly one of alphas, w");
    if (m.contains("alphas")) {
      const auto a = numbers(m.at("alphas"), "model.alphas");
      if (a.size() != c.size()) fail("model.alphas", "needs one strength per center");
      RVector d(static_cast<Eigen::Index>(a.size()));
      for (std::size_t i = 0; i < a.size(); ++i) d(static_cast<Eigen::Index>(i)) = a[i];
      cfg.w = d.cast<cplx>().asDiagonal();
    } else {
      cfg.w = coupling_matrix(m.at("w"), "model.w", c.size());
    }
  } else if (kind == "lattice") {
    cfg.kind = ModelKind::lattice;
    allow_keys(m, path, {"kind", "dims", "spacing", "origin", "alpha"});
    const json& d = require(m, path, "dims");
    if (!d.is_array() || d.size() != 3) fail("model.dims", "expected [nx, ny, nz]");
    const int nx = count(d[0], "model.dims[0]", 1);
    const int ny = count(d[1], "model.dims[1]", 1);
    const int nz = count(d[2], "model.dims[2]", 1);
    if (static_cast<long long>(nx) * ny * nz > 4096) fail("model.dims", "at most 4096 sites");
    const double spacing = positive(require(m, path, "spacing"), "model.spacing");
    const Point origin = m.contains("origin") ? point(m.at("origin"), "model.origin") : Point::Zero();
    const double alpha = number(require(m, path, "alpha"), "model.alpha");
    for (int k = 0; k < nz; ++k) {
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) cfg.centers.push_back(origin + spacing * Point(i, j, k));
      }
    }
    cfg.w = CMatrix::Identity(static_cast<Eigen::Index>(cfg.centers.size()),
                              static_cast<Eigen::Index>(cfg.centers.size())) *
            alpha;
  } else if (kind == "segment") {
    cfg.kind = ModelKind::segment;
    allow_keys(m, path, {"kind", "l", "nodes", "potential"});
    cfg.segment.length = positive(require(m, path, "l"), "model.l");
    if (m.contains("nodes")) cfg.segment.nodes = count(m.at("nodes"), "model.nodes", 16);
    cfg.segment.potential =
        m.contains("potential") ? potential(m.at("potential"), "model.potential") : Potential::constant(0.0);
  } else {
    fail("model.kind", "expected finite, points, lattice or segment");
  }
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::finite: return "finite";
    case ModelKind::points: return "points";
    case ModelKind::lattice: return "lattice";
    case ModelKind::segment: return "segment";
  }
  return "";
}

const char* to_string(Command command) {
  switch (command) {
    case Command::bound_states: return "bound-states";
    case Command::green: return "green";
    case Command::verify: return "verify";
    case Command::trace: return "trace";
  }
  return "";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::bound_states, Command::green, Command::verify, Command::trace}) {
    if (name == to_string(c)) return c;
  }
  throw ConfigError("command: unknown command '" + name + "'");
}

std::map<std::string, double> default_tolerances(ModelKind kind, Command command) {
  if (command == Command::trace) return {{"trace_relative", 1e-3}};
  if (command != Command::verify) return {};
  switch (kind) {
    case ModelKind::finite:
      return {{"oracle_relative", 1e-10}, {"hilbert", 1e-10}, {"conjugate_symmetry", 1e-10},
              {"compression_kernel", 1e-12}};
    case ModelKind::points:
    case ModelKind::lattice:
      return {{"boundary_condition", 1e-6}, {"kernel_symmetry", 1e-12}};
    case ModelKind::segment:
      return {{"gstar_g", 1e-8}, {"norm_bound_excess", 1e-6}, {"conjugate_symmetry", 1e-10}};
  }
  return {};
}

RunConfig parse_config(const std::string& json_text, Command command,
                       std::optional<std::uint64_t> seed_override) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) fail("config", "expected a JSON object");
  allow_keys(doc, "", {"command", "model", "seed", "energy", "energies", "kappa_range", "scan", "source",
                       "pole", "grid", "trace", "tolerances", "description"});

  RunConfig cfg;
  cfg.command = command;
  if (doc.contains("command")) {
    if (!doc.at("command").is_string()) fail("command", "expected a string");
    if (parse_command(doc.at("command").get<std::string>()) != command) {
      fail("command", "config is for '" + doc.at("command").get<std::string>() + "', not '" +
                          to_string(command) + "'");
    }
  }
  parse_model(require(doc, "", "model"), cfg);

  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) fail("seed", "expected a non-negative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (seed_override) cfg.seed = *seed_override;

  if (doc.contains("energy") && doc.contains("energies")) fail("energy", "give either energy or energies");
  if (doc.contains("energy")) cfg.energies.push_back(energy(doc.at("energy"), "energy"));
  if (doc.contains("energies")) {
    const json& e = doc.at("energies");
    if (!e.is_array()) fail("energies", "expected an array");
    for (std::size_t i = 0; i < e.size(); ++i) cfg.energies.push_back(energy(e[i], "energies[" + std::to_string(i) + "]"));
  }
  if (doc.contains("kappa_range")) {
    const auto r = numbers(doc.at("kappa_range"), "kappa_range", 2);
    if (r.size() != 2 || !(r[0] > 0.0) || !(r[0] < r[1])) fail("kappa_range", "expected [lo, hi] with 0 < lo < hi");
    cfg.kappa_lo = r[0];
    cfg.kappa_hi = r[1];
  }
  if (doc.contains("scan")) cfg.scan = count(doc.at("scan"), "scan", 2);
  if (doc.contains("source")) cfg.source = source(doc.at("source"), "source");
  if (doc.contains("pole")) cfg.pole = point(doc.at("pole"), "pole");
  if (doc.contains("grid")) cfg.grid = grid(doc.at("grid"), "grid");
  if (doc.contains("trace")) {
    const json& t = doc.at("trace");
    allow_keys(t, "trace", {"x", "rho"});
    cfg.trace.x = numbers(require(t, "trace", "x"), "trace.x", 1);
    cfg.trace.rho = numbers(require(t, "trace", "rho"), "trace.rho", 2);
  }

  cfg.tolerances = default_tolerances(cfg.kind, command);
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (!t.is_object()) fail("tolerances", "expected an object");
    for (const auto& [key, value] : t.items()) {
      if (!cfg.tolerances.count(key)) fail("tolerances." + key, "not used by this command");
      cfg.tolerances[key] = positive(value, "tolerances." + key);
    }
  }

  // command requirements
  const bool point_like = cfg.kind == ModelKind::points || cfg.kind == ModelKind::lattice;
  auto single_energy = [&]() {
    if (cfg.energies.size() != 1) fail("energy", cfg.energies.empty() ? "missing field" : "expected one energy");
  };
  switch (command) {
    case Command::bound_states:
      if (cfg.kind == ModelKind::finite) fail("model.kind", "bound-states needs points, lattice or segment");
      if (!doc.contains("kappa_range")) fail("kappa_range", "missing field");
      break;
    case Command::green:
      if (cfg.kind == ModelKind::finite) fail("model.kind", "green needs points, lattice or segment");
      single_energy();
      if (cfg.grid.empty()) fail("grid", "missing field");
      if (cfg.kind == ModelKind::segment && !cfg.source) fail("source", "missing field");
      if (point_like && cfg.source.has_value() == cfg.pole.has_value()) {
        fail("source", "expected exactly one of source, pole");
      }
      break;
    case Command::verify:
      if (point_like && !doc.contains("kappa_range")) fail("kappa_range", "missing field");
      if (cfg.kind == ModelKind::segment && cfg.energies.empty()) fail("energies", "missing field");
      if (cfg.kind == ModelKind::finite && cfg.finite.max_rank >= cfg.finite.max_dim) {
        fail("model.max_rank", "must be below max_dim");
      }
      break;
    case Command::trace:
      if (cfg.kind != ModelKind::segment) fail("model.kind", "trace needs a segment model");
      single_energy();
      if (!cfg.source) fail("source", "missing field");
      if (cfg.trace.x.empty()) fail("trace", "missing field");
      break;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, Command command,
                      std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return parse_config(text.str(), command, seed_override);
}

}  // namespace krein::cli
