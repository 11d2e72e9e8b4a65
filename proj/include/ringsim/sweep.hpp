#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringsim/eigensolver.hpp"
#include "ringsim/model.hpp"
#include "ringsim/observables.hpp"

namespace ringsim {

enum class GridKind { linear, logarithmic };

struct Grid {
    GridKind kind = GridKind::linear;
    double first = 0.0;
    double last = 0.0;
    int count = 1;

    /// Throws InvalidArgument unless count >= 1, endpoints are finite, the
    /// grid is strictly monotone (count > 1 needs first != last) and, for a
    /// logarithmic grid, both endpoints are positive.
    std::vector<double> values() const;
};

enum class SweepParameter { interaction, phase, barrier, atoms, modes };

std::string to_string(SweepParameter p);
std::string to_string(GridKind k);
/// Throws InvalidArgument for unknown names.
SweepParameter parse_sweep_parameter(const std::string& name);
GridKind parse_grid_kind(const std::string& name);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::interaction;
    Grid grid;
    SystemParams base{5, 20, 0.0, 0.008, kPi};
    CouplingOrder order = CouplingOrder::leading;

    // outputs beyond Delta E and P(K1), P(K2)
    bool loss = false;
    LossOptions loss_options;
    int target_k1 = 0;                // K1 of Q
    std::optional<int> target_k2;     // K2 of Q, defaults to N at each point

    // atom-number sweeps
    std::optional<double> hold_gamma;  // recompute g = gamma N / (2 pi^2) per point
    std::map<int, int> modes_for_atoms;  // window override for specific N

    bool warm_start = true;
    int threads = 1;  // used only without warm start
    SolverOptions solver;
    std::optional<std::string> cache_dir;  // empty: no cache

    /// Parameters at one grid value.
    SystemParams point(double value) const;
    /// Throws InvalidArgument when the spec or any grid point is invalid.
    void validate() const;
};

struct SweepRecord {
    double param = 0.0;
    int n_atoms = 0;
    int n_modes = 0;
    double gamma = 0.0;
    double g_tilde = 0.0;
    double e0 = 0.0;
    double e1 = 0.0;
    double delta_e = 0.0;
    double p_k1 = 0.0;
    double p_k2 = 0.0;
    double quality = 0.0;
    double qbar_loss = 0.0;  // NaN unless loss was requested
    int iterations = 0;
    double residual = 0.0;
    bool degenerate = false;
    bool cached = false;
    double wall_seconds = 0.0;
    bool ok = true;
    std::string error;
};

/// Evaluates every grid point. Records come back in grid order; per-point
/// failures are recorded (ok = false, NaN values) without aborting.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

/// CSV with '#' header lines: column units and the manifest digest.
std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRecord>& records,
                      const std::string& manifest_digest);

/// Environment variable naming the default cache directory.
inline constexpr const char* kCacheDirEnv = "RINGSIM_CACHE_DIR";

}  // namespace ringsim
