#pragma once

// Model parameters in the canonical unit system of the ring:
//   E0 = 2 pi^2 hbar^2 / (M L^2) = 1,  L = 1,  hbar = 1.
// Interaction and barrier strengths are measured in E0 L, times in hbar/E0.

#include <optional>
#include <string>

namespace ringsim {

inline constexpr double kPi = 3.14159265358979323846;

class SystemParams {
public:
    /// Throws InvalidArgument unless n_atoms >= 1, n_modes even and >= 2,
    /// and interaction/barrier are finite and non-negative.
    SystemParams(int n_atoms, int n_modes, double interaction, double barrier, double phase);

    int n_atoms() const noexcept { return n_atoms_; }
    int n_modes() const noexcept { return n_modes_; }
    double interaction() const noexcept { return interaction_; }
    double barrier() const noexcept { return barrier_; }
    double phase() const noexcept { return phase_; }

    /// Lowest and highest momentum of the truncated window {-r/2+1, ..., r/2}.
    int k_min() const noexcept { return -n_modes_ / 2 + 1; }
    int k_max() const noexcept { return n_modes_ / 2; }

    SystemParams with_atoms(int n) const;
    SystemParams with_modes(int r) const;
    SystemParams with_interaction(double g) const;
    SystemParams with_barrier(double b) const;
    SystemParams with_phase(double omega) const;

    bool operator==(const SystemParams&) const = default;

private:
    int n_atoms_;
    int n_modes_;
    double interaction_;
    double barrier_;
    double phase_;
};

enum class CouplingOrder {
    identity,         // no rescaling, g_tilde = g
    leading,          // g0 = r/2
    energy_corrected  // 1/g0 = 2/r + (2E - 1)/(6 r^3)
};

std::string to_string(CouplingOrder order);

struct RescaledCoupling {
    double g_tilde;
    double g_zero;  // +inf for CouplingOrder::identity
    CouplingOrder order;
};

/// gamma = 2 pi^2 g / N.
double lieb_liniger_gamma(const SystemParams& params);
double lieb_liniger_gamma(int n_atoms, double interaction);

/// Interaction strength that reproduces exact two-body energies in a window of
/// r modes: g_tilde = g / (1 + g/g0). Accepts g = +inf (returns g0).
RescaledCoupling rescale_interaction(double g, int n_modes,
                                     std::optional<double> energy_hint = std::nullopt);

/// Bare coupling, used for the "rescaling disabled" comparisons.
RescaledCoupling unscaled_interaction(double g);

/// Convenience: the coupling the pipeline uses for params.
RescaledCoupling coupling_for(const SystemParams& params, CouplingOrder order);

// --------------------------------------------------------------------------
// Laboratory units

namespace si {
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double atomic_mass = 1.66053906660e-27;  // kg
}  // namespace si

struct PhysicalRing {
    double atom_mass;    // kg
    double ring_radius;  // m

    PhysicalRing(double mass_kg, double radius_m);
    double circumference() const noexcept { return 2.0 * kPi * ring_radius; }
    /// E0 in joules.
    double energy_unit() const noexcept;
};

struct PhysicalReport {
    int n_atoms;
    double atom_mass_kg;
    double ring_radius_m;
    double circumference_m;
    double energy_unit_joule;
    double delta_e_canonical;
    double delta_e_joule;
    double delta_e_over_hbar_per_s;
    double barrier_angular_speed_rad_per_s;  // at phase pi
    double barrier_frequency_hz;             // omega / 2 pi
    double mean_spacing_m;

    /// Flat key/value JSON with SI units in the key names.
    std::string to_json() const;
};

PhysicalReport to_physical(const SystemParams& params, const PhysicalRing& ring,
                           double delta_e_canonical);

/// Energy in joules back to units of E0.
double to_canonical_energy(const PhysicalRing& ring, double energy_joule);

/// Tangential barrier angular speed (rad/s) for a given rotational phase.
double barrier_angular_speed(const PhysicalRing& ring, double phase);

}  // namespace ringsim
