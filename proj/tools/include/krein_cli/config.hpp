#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "krein/energy.hpp"
#include "krein/free_resolvent.hpp"
#include "krein/linalg.hpp"
#include "krein/segment.hpp"

namespace krein::cli {

/// Malformed or incomplete configuration; exit status 2. The message names
/// the offending field by its JSON path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output; exit status 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { finite, points, lattice, segment };
enum class Command { bound_states, green, verify, trace };

const char* to_string(ModelKind kind);
const char* to_string(Command command);
Command parse_command(const std::string& name);

/// Random-instance parameters of the finite model. Dimensions are drawn per
/// instance: n in [2, max_dim], N in [1, min(max_rank, n)].
struct FiniteSpec {
  int max_dim = 16;
  int max_rank = 4;
  int models = 100;
  int energies = 10;
};

struct SegmentSpec {
  double length = 1.0;
  int nodes = 200;
  std::optional<Potential> potential;
};

struct TraceSpec {
  std::vector<double> x;
  std::vector<double> rho;
};

/// One validated run. Points, lattice and segment fields are only populated
/// for the matching model kind.
struct RunConfig {
  ModelKind kind = ModelKind::finite;
  Command command = Command::verify;
  std::uint64_t seed = 0;

  FiniteSpec finite;
  std::vector<Point> centers;  ///< points and lattice
  CMatrix w;                   ///< points and lattice
  SegmentSpec segment;

  std::vector<Energy> energies;
  double kappa_lo = 0.0;
  double kappa_hi = 0.0;
  int scan = 400;

  std::optional<RadialSource> source;
  std::optional<Point> pole;
  std::vector<Point> grid;
  TraceSpec trace;

  /// Thresholds for verify and trace; defaults per command, overridable.
  std::map<std::string, double> tolerances;
};

/// Default tolerance table for a model kind and command.
std::map<std::string, double> default_tolerances(ModelKind kind, Command command);

/// Validates a JSON document against the command chosen on the command line.
/// A "command" field in the document, if present, must agree with it.
RunConfig parse_config(const std::string& json_text, Command command,
                       std::optional<std::uint64_t> seed_override = std::nullopt);

RunConfig load_config(const std::filesystem::path& path, Command command,
                      std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace krein::cli
