#pragma once

#include <span>

namespace lattsite::renorm {

// Energies in units of hbar*omega throughout this module. u2 is the bare
// on-site two-body coupling in the same units.

// Sum over excited modes mu of K_{mu 0}^2 / E_mu with E_mu <= cutoff.
// Converges geometrically; this channel carries the induced three-body term.
double three_body_channel_sum(int cutoff);

// Sum over ordered excited pairs (mu, nu) != (0, 0) of K_{mu nu}^2 / E_pair
// with E_pair = E_mu + E_nu <= cutoff. Diverges like sqrt(cutoff); this is
// the piece the counterterm removes.
double two_body_channel_sum(int cutoff);

// beta(cutoff) = 6 * three_body_channel_sum(cutoff); dimensionless strength
// of the induced three-body interaction, u3 = -beta * xi^2 * hbar * omega.
double beta(int cutoff);
double beta_closed_form();

// Induced three-body coupling at the given cutoff: -6 * u2^2 * sum3.
double delta_u3(int cutoff, double u2);

// Per-pair counterterm A(cutoff) = +u2^2 * two_body_channel_sum(cutoff),
// chosen so the renormalized n = 2 shift vanishes identically.
double counterterm(int cutoff, double u2);

// Bare second-order energy shift for n atoms on one site, intermediate pair
// energies bounded by cutoff.
double raw_second_order_shift(int n, int cutoff, double u2);

// raw shift plus counterterm * n(n-1)/2; equals delta_u3 * n(n-1)(n-2)/6.
double renormalized_shift(int n, int cutoff, double u2);

// Same second-order sum but with each intermediate mode individually bounded
// by the cutoff and no bound on the pair energy. This matches a Fock-space
// truncation at that mode cutoff, which is what an exact-diagonalization run
// on the same mode set resolves.
double mode_truncated_second_order_shift(int n, int cutoff, double u2);

// Least-squares slope of log(y) against log(x). Needs xs, ys > 0 and at
// least two points.
double fit_power_law_exponent(std::span<const double> xs, std::span<const double> ys);

// Power-law growth exponent of the two-body channel sum across the given
// cutoffs (at least four distinct values, largest >= 40). Approaches 1/2.
double divergence_exponent(std::span<const int> cutoffs);

struct PerturbationSummary {
  int cutoff = 0;
  double s3 = 0.0;                // three-body channel sum
  double beta = 0.0;              // 6 * s3
  double counterterm = 0.0;       // A / u2^2
  double raw_two_body_sum = 0.0;  // raw two-body channel coefficient, -A / u2^2
};

PerturbationSummary summarize(int cutoff);

}  // namespace lattsite::renorm
