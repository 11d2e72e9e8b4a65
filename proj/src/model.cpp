#include "ringsim/model.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "ringsim/errors.hpp"

namespace ringsim {

namespace {

void check_params(int n_atoms, int n_modes, double g, double b, double omega) {
    if (n_atoms < 1) {
        throw InvalidArgument("n_atoms must be >= 1, got " + std::to_string(n_atoms));
    }
    if (n_modes < 2 || n_modes % 2 != 0) {
        throw InvalidArgument("n_modes must be even and >= 2, got " + std::to_string(n_modes));
    }
    if (!std::isfinite(g) || g < 0.0) {
        throw InvalidArgument("interaction must be finite and non-negative");
    }
    if (!std::isfinite(b) || b < 0.0) {
        throw InvalidArgument("barrier must be finite and non-negative");
    }
    if (!std::isfinite(omega)) {
        throw InvalidArgument("phase must be finite");
    }
}

}  // namespace

SystemParams::SystemParams(int n_atoms, int n_modes, double interaction, double barrier,
                           double phase)
    : n_atoms_(n_atoms), n_modes_(n_modes), interaction_(interaction), barrier_(barrier),
      phase_(phase) {
    check_params(n_atoms, n_modes, interaction, barrier, phase);
}

SystemParams SystemParams::with_atoms(int n) const {
    return {n, n_modes_, interaction_, barrier_, phase_};
}
SystemParams SystemParams::with_modes(int r) const {
    return {n_atoms_, r, interaction_, barrier_, phase_};
}
SystemParams SystemParams::with_interaction(double g) const {
    return {n_atoms_, n_modes_, g, barrier_, phase_};
}
SystemParams SystemParams::with_barrier(double b) const {
    return {n_atoms_, n_modes_, interaction_, b, phase_};
}
SystemParams SystemParams::with_phase(double omega) const {
    return {n_atoms_, n_modes_, interaction_, barrier_, omega};
}

std::string to_string(CouplingOrder order) {
    switch (order) {
        case CouplingOrder::identity: return "identity";
        case CouplingOrder::leading: return "leading";
        case CouplingOrder::energy_corrected: return "energy-corrected";
    }
    return "unknown";
}

double lieb_liniger_gamma(int n_atoms, double interaction) {
    return 2.0 * kPi * kPi * interaction / static_cast<double>(n_atoms);
}

double lieb_liniger_gamma(const SystemParams& params) {
    return lieb_liniger_gamma(params.n_atoms(), params.interaction());
}

RescaledCoupling rescale_interaction(double g, int n_modes, std::optional<double> energy_hint) {
    if (std::isnan(g) || g < 0.0) {
        throw InvalidArgument("interaction must be non-negative");
    }
    if (n_modes < 2 || n_modes % 2 != 0) {
        throw InvalidArgument("n_modes must be even and >= 2");
    }
    const double r = n_modes;
    double g0 = r / 2.0;
    CouplingOrder order = CouplingOrder::leading;
    if (energy_hint) {
        const double inv = 2.0 / r + (2.0 * *energy_hint - 1.0) / (6.0 * r * r * r);
        if (!(inv > 0.0)) {
            throw InvalidArgument("energy hint drives 1/g0 non-positive");
        }
        g0 = 1.0 / inv;
        order = CouplingOrder::energy_corrected;
    }
    if (std::isinf(g)) {
        return {g0, g0, order};
    }
    return {g / (1.0 + g / g0), g0, order};
}

RescaledCoupling unscaled_interaction(double g) {
    if (std::isnan(g) || g < 0.0) {
        throw InvalidArgument("interaction must be non-negative");
    }
    return {g, std::numeric_limits<double>::infinity(), CouplingOrder::identity};
}

RescaledCoupling coupling_for(const SystemParams& params, CouplingOrder order) {
    switch (order) {
        case CouplingOrder::identity: return unscaled_interaction(params.interaction());
        case CouplingOrder::leading: return rescale_interaction(params.interaction(), params.n_modes());
        case CouplingOrder::energy_corrected:
            throw InvalidArgument("energy-corrected coupling needs an explicit energy hint");
    }
    throw InvalidArgument("unknown coupling order");
}

// --------------------------------------------------------------------------

PhysicalRing::PhysicalRing(double mass_kg, double radius_m)
    : atom_mass(mass_kg), ring_radius(radius_m) {
    if (!(mass_kg > 0.0) || !std::isfinite(mass_kg)) {
        throw InvalidArgument("atom mass must be positive");
    }
    if (!(radius_m > 0.0) || !std::isfinite(radius_m)) {
        throw InvalidArgument("ring radius must be positive");
    }
}

double PhysicalRing::energy_unit() const noexcept {
    const double length = circumference();
    return 2.0 * kPi * kPi * si::hbar * si::hbar / (atom_mass * length * length);
}

double barrier_angular_speed(const PhysicalRing& ring, double phase) {
    // v = hbar Omega / (M L), omega = v / R
    const double v = si::hbar * phase / (ring.atom_mass * ring.circumference());
    return v / ring.ring_radius;
}

double to_canonical_energy(const PhysicalRing& ring, double energy_joule) {
    return energy_joule / ring.energy_unit();
}

PhysicalReport to_physical(const SystemParams& params, const PhysicalRing& ring,
                           double delta_e_canonical) {
    PhysicalReport rep{};
    rep.n_atoms = params.n_atoms();
    rep.atom_mass_kg = ring.atom_mass;
    rep.ring_radius_m = ring.ring_radius;
    rep.circumference_m = ring.circumference();
    rep.energy_unit_joule = ring.energy_unit();
    rep.delta_e_canonical = delta_e_canonical;
    rep.delta_e_joule = delta_e_canonical * rep.energy_unit_joule;
    rep.delta_e_over_hbar_per_s = rep.delta_e_joule / si::hbar;
    rep.barrier_angular_speed_rad_per_s = barrier_angular_speed(ring, kPi);
    rep.barrier_frequency_hz = rep.barrier_angular_speed_rad_per_s / (2.0 * kPi);
    rep.mean_spacing_m = rep.circumference_m / params.n_atoms();
    return rep;
}

std::string PhysicalReport::to_json() const {
    nlohmann::ordered_json j;
    j["n_atoms"] = n_atoms;
    j["atom_mass_kg"] = atom_mass_kg;
    j["ring_radius_m"] = ring_radius_m;
    j["circumference_m"] = circumference_m;
    j["energy_unit_E0_J"] = energy_unit_joule;
    j["delta_e_E0"] = delta_e_canonical;
    j["delta_e_J"] = delta_e_joule;
    j["delta_e_over_hbar_per_s"] = delta_e_over_hbar_per_s;
    j["barrier_angular_speed_rad_per_s"] = barrier_angular_speed_rad_per_s;
    j["barrier_frequency_Hz"] = barrier_frequency_hz;
    j["mean_spacing_m"] = mean_spacing_m;
    return j.dump(2);
}

}  // namespace ringsim
