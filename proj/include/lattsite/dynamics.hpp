#pragma once

#include <complex>
#include <span>
#include <vector>

#include "lattsite/model.hpp"

namespace lattsite::dynamics {

// Poisson number distribution of a coherent state, truncated where the
// cumulative tail drops below tail_tol.
struct CoherentStateSpec {
  double nbar = 0.0;
  int n_max = 1;
  double tail_tol = 1e-12;
};

// Smallest occupation cutoff whose Poisson tail is <= tail_tol; never less
// than 1.
int truncation_bound(double nbar, double tail_tol);

CoherentStateSpec make_coherent_spec(double nbar, double tail_tol = 1e-12);

// Normalized matter-wave interference amplitude
//   A(t) = exp(-nbar) sum_n (nbar^n / n!) exp(-i (E(n+1)-E(n)) t / hbar),
// truncated at spec.n_max. A(0) = 1 up to the Poisson tail.
std::complex<double> amplitude(double t, const CoherentStateSpec& spec, const model::CouplingSet& c);

// |A(t)|^2
double visibility(double t, const CoherentStateSpec& spec, const model::CouplingSet& c);

// exp(-2 nbar (1 - cos(u2 t / hbar))); exact when u3 = 0
double visibility_closed_form(double t, double nbar, double u2);

// Sites of a ball of the given diameter on the integer lattice, grouped by
// integer squared radius. The trap envelope depresses the coupling by eps
// (fractionally) from center to edge with a parabolic profile; u3 follows
// quadratically when scale_u3 is set.
struct LatticeEnvelope {
  int diameter_sites = 60;
  double eps = 0.05;
  bool scale_u3 = true;
  std::vector<long long> shell_counts;  // index = squared radius
  long long total_sites = 0;

  static LatticeEnvelope make(int diameter_sites = 60, double eps = 0.05, bool scale_u3 = true);
};

// Visibility of the site-averaged amplitude. eps = 0 reduces to
// visibility() identically.
double averaged_visibility(double t, const CoherentStateSpec& spec, const model::CouplingSet& c,
                           const LatticeEnvelope& env);

struct VisibilityTrace {
  std::vector<double> times;        // seconds
  std::vector<double> visibility;   // homogeneous-lattice signal
  std::vector<double> closed_form;  // filled only when requested
  std::vector<double> averaged;     // filled only when an envelope is given
};

struct TraceOptions {
  bool with_closed_form = false;
  const LatticeEnvelope* envelope = nullptr;
};

// times must be non-empty and strictly increasing
VisibilityTrace trace(std::span<const double> times, const CoherentStateSpec& spec, const model::CouplingSet& c,
                      const TraceOptions& options = {});

}  // namespace lattsite::dynamics
