#pragma once

#include <compare>
#include <vector>

namespace lattsite::oscillator {

// One 3-D harmonic oscillator mode, indexed by quanta per axis.
struct Mode {
  int x = 0;
  int y = 0;
  int z = 0;

  int quanta() const { return x + y + z; }
  auto operator<=>(const Mode&) const = default;
};

// All modes with quanta() <= cutoff, in lexicographic (x, y, z) order.
// Count is C(cutoff+3, 3).
std::vector<Mode> enumerate_modes(int cutoff);

// 1-D contact overlap between two-particle states: both particles start in
// the 1-D ground level and scatter into levels m and n. Closed form from
// Hermite polynomial products and Gaussian moments. Zero when m+n is odd.
double k1d(int m, int n);

// Same quantity by Gauss-Hermite quadrature. Independent route used as the
// oracle for k1d. nodes >= 2 required.
double k1d_quadrature(int m, int n, int nodes);

// 1-D overlap with all four indices free: integral of four normalized
// harmonic-oscillator wavefunctions at a common point (times the Gaussian
// weight absorbed in the wavefunctions). overlap4(m, n, 0, 0) == k1d(m, n).
double overlap4(int a, int b, int c, int d);

// 3-D matrix element for scattering from the ground pair into (mu, nu):
// product of the per-axis k1d factors... but with the pair structure this is
// K_{mu nu 0 0} = prod_axis overlap4(mu_axis, nu_axis, 0, 0).
double K3d(const Mode& mu, const Mode& nu);

// Precomputed table of the K_{mu nu 0 0} slice over all modes with
// quanta <= cutoff. Mode list is the enumerate_modes order.
class MatrixElementTable {
 public:
  explicit MatrixElementTable(int cutoff);

  const std::vector<Mode>& modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  // K_{mu nu 0 0} by mode-list indices.
  double value(int i, int j) const { return table_[static_cast<size_t>(i) * modes_.size() + j]; }

 private:
  int cutoff_;
  std::vector<Mode> modes_;
  std::vector<double> table_;
};

// Per-axis shell weight: sum over m+n == e of k1d(m, n)^2. Closed form
// C(e, e/2) / 2^e for even e, zero for odd e.
double shell_weight_closed_form(int e);

}  // namespace lattsite::oscillator
