#include "lattsite/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lattsite::model {

namespace {

constexpr SpeciesInfo kSpecies[] = {
    {"Rb87", 86.909180 * constants::atomic_mass_unit, 5.3e-9},
};

void require_valid(const PhysicalParams& p) {
  if (!(p.atom_mass > 0.0)) throw std::invalid_argument("atom_mass must be > 0");
  if (!(p.omega > 0.0)) throw std::invalid_argument("omega must be > 0");
}

}  // namespace

const SpeciesInfo* find_species(std::string_view name) {
  for (const auto& s : kSpecies)
    if (name == s.name) return &s;
  return nullptr;
}

double sigma(const PhysicalParams& p) {
  require_valid(p);
  return std::sqrt(constants::hbar / (p.atom_mass * p.omega));
}

double effective_scattering_length(double a_scat, double r_e, double k) {
  if (a_scat == 0.0) return 0.0;
  const double inv_a = 1.0 / a_scat;
  const double denom = inv_a - 0.5 * r_e * k * k;
  if (std::abs(denom) < 1e-6 * std::abs(inv_a))
    throw std::domain_error("effective_scattering_length: too close to the pole");
  return 1.0 / denom;
}

CouplingSet derive_couplings(const PhysicalParams& p, double beta, DerivationFlags* flags) {
  require_valid(p);
  const double s = sigma(p);
  double a = p.a_scat;
  if (p.r_e != 0.0) a = effective_scattering_length(a, p.r_e, 1.0 / s);
  CouplingSet c;
  c.hbar_omega = constants::hbar * p.omega;
  c.xi = std::sqrt(2.0 / std::numbers::pi) * a / s;
  c.u2 = c.xi * c.hbar_omega;
  c.u3 = p.u3_intrinsic - ((beta * c.xi) * c.xi) * c.hbar_omega;
  if (flags) flags->strong_coupling = std::abs(c.xi) > 0.2;
  return c;
}

double interaction_energy(int n, const CouplingSet& c) {
  if (n < 0) throw std::invalid_argument("interaction_energy: n must be >= 0");
  const double pairs = n * (n - 1) / 2;
  const double triples = n * (n - 1) * (n - 2) / 6;
  return c.u2 * pairs + c.u3 * triples;
}

double energy_gap(int n, const CouplingSet& c) {
  if (n < 0) throw std::invalid_argument("energy_gap: n must be >= 0");
  return n * c.u2 + (n * (n - 1) / 2) * c.u3;
}

}  // namespace lattsite::model
