#pragma once

#include <string_view>

namespace lattsite::model {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
}  // namespace constants

struct SpeciesInfo {
  const char* name;
  double mass;            // kg
  double default_a_scat;  // m
};

// nullptr when the name is unknown
const SpeciesInfo* find_species(std::string_view name);

struct PhysicalParams {
  double atom_mass = 0.0;     // kg, > 0
  double a_scat = 0.0;        // m, may be negative or zero
  double omega = 0.0;         // rad/s, > 0
  double r_e = 0.0;           // m, effective range; 0 disables the correction
  double u3_intrinsic = 0.0;  // J, additive three-body term
};

struct CouplingSet {
  double xi = 0.0;          // dimensionless interaction strength
  double u2 = 0.0;          // J
  double u3 = 0.0;          // J
  double hbar_omega = 0.0;  // J
};

struct DerivationFlags {
  bool strong_coupling = false;  // |xi| > 0.2, perturbation theory suspect
};

// Ground-state oscillator length sqrt(hbar / (m omega)).
double sigma(const PhysicalParams& p);

// Momentum-corrected scattering length 1 / (1/a - r_e k^2 / 2). Throws
// std::domain_error within 1e-6 relative of the pole. a == 0 returns 0.
double effective_scattering_length(double a_scat, double r_e, double k);

// xi = sqrt(2/pi) a / sigma, u2 = xi hbar omega, u3 = u3_intrinsic -
// beta xi^2 hbar omega. When r_e != 0 the scattering length is first
// corrected at k = 1/sigma.
CouplingSet derive_couplings(const PhysicalParams& p, double beta, DerivationFlags* flags = nullptr);

// On-site interaction energy for n atoms:
// u2 n(n-1)/2 + u3 n(n-1)(n-2)/6.
double interaction_energy(int n, const CouplingSet& c);

// E(n+1) - E(n) = n u2 + n(n-1) u3 / 2; the phase steps that drive the
// collapse-and-revival signal.
double energy_gap(int n, const CouplingSet& c);

}  // namespace lattsite::model
