// End-to-end checks of the whole pipeline at fixed tolerances. Each check
// prints one line; the exit code is the number of failures.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "lattsite/dynamics.hpp"
#include "lattsite/exact_diag.hpp"
#include "lattsite/model.hpp"
#include "lattsite/oscillator.hpp"
#include "lattsite/renorm.hpp"

using namespace lattsite;

static int failures = 0;

static void report(bool ok, int line, const char* label, const char* detail) {
  if (ok)
    std::printf("[PASS] %s (%s)\n", label, detail);
  else {
    std::printf("[FAIL] acceptance.cpp:%d %s (%s)\n", line, label, detail);
    ++failures;
  }
}

#define REPORT(ok, label, detail) report((ok), __LINE__, (label), (detail))

int main() {
  char d[256];

  // 1: cutoff series of the induced coefficient against its closed form
  {
    const double closed = renorm::beta_closed_form();
    const double b4 = renorm::beta(4);
    const double b100 = renorm::beta(100);
    const bool ok = std::abs(b4 - 1.30) <= 0.01 && std::abs(b100 - closed) <= 5e-4 &&
                    std::abs(closed - 1.3442220154459528) <= 1e-7;
    std::snprintf(d, sizeof d, "beta(4) = %.10g, beta(100) - closed = %.3g, closed = %.17g", b4, b100 - closed,
                  closed);
    REPORT(ok, "induced three-body coefficient converges to its closed form", d);
  }

  // 2: the first shell alone gives exactly 9/8
  {
    const double b2 = renorm::beta(2);
    std::snprintf(d, sizeof d, "beta(2) = %.17g, target 1.125", b2);
    REPORT(std::abs(b2 - 1.125) <= 1e-12, "two-shell coefficient equals 9/8", d);
  }

  // 3: recursion for the overlap integrals against direct quadrature
  {
    double worst = 0.0;
    for (int m = 0; m <= 12; ++m)
      for (int n = 0; n <= 12; ++n)
        worst = std::max(worst, std::abs(oscillator::k1d(m, n) - oscillator::k1d_quadrature(m, n, 64)));
    const double k11 = oscillator::k1d(1, 1);
    const bool ok = worst <= 1e-12 && std::abs(k11 - 0.5) <= 1e-15;
    std::snprintf(d, sizeof d, "max |recursion - quadrature| = %.3g over m, n <= 12; k1d(1,1) = %.17g", worst, k11);
    REPORT(ok, "mode overlap integrals match direct quadrature", d);
  }

  // 4: the uncorrected pair sum grows like sqrt(cutoff)
  {
    const std::vector<int> cuts{20, 40, 80, 160};
    const double ex = renorm::divergence_exponent(cuts);
    std::snprintf(d, sizeof d, "fitted exponent = %.6f, expected 0.50 +- 0.05", ex);
    REPORT(std::abs(ex - 0.5) <= 0.05, "bare pair sum diverges as the square root of the cutoff", d);
  }

  // 5: the counterterm kills the pair shift; what survives is the triple term
  {
    double worst_pair = 0.0, worst_rel = 0.0;
    for (int cutoff : {2, 4, 8}) {
      worst_pair = std::max(worst_pair, std::abs(renorm::renormalized_shift(2, cutoff, 0.07)));
      const double d3 = renorm::delta_u3(cutoff, 0.07);
      for (int n : {3, 4, 5}) {
        const double got = renorm::renormalized_shift(n, cutoff, 0.07);
        const double want = d3 * n * (n - 1) * (n - 2) / 6.0;
        worst_rel = std::max(worst_rel, std::abs(got - want) / std::abs(want));
      }
    }
    const bool ok = worst_pair <= 1e-12 && worst_rel <= 1e-12;
    std::snprintf(d, sizeof d, "max |pair shift| = %.3g, max triple-route relative gap = %.3g", worst_pair,
                  worst_rel);
    REPORT(ok, "counterterm cancels the pair shift, the remainder is pure three-body", d);
  }

  // 6: what perturbation theory misses shrinks as the coupling cubed
  {
    auto residual = [](double xi) {
      const auto r = exact_diag::exact_diag_oracle(3, 4, xi);
      const double pred = 3.0 * xi + renorm::mode_truncated_second_order_shift(3, 4, xi);
      return r.energy - pred;
    };
    const double ratio = std::abs(residual(0.07) / residual(0.035));
    std::snprintf(d, sizeof d, "residual(0.07) / residual(0.035) = %.6f, band [6, 10]", ratio);
    REPORT(ratio >= 6.0 && ratio <= 10.0, "diagonalization residual scales as the coupling cubed", d);
  }

  // 7: derived couplings for rubidium in a 30 kHz well
  {
    const model::SpeciesInfo* rb = model::find_species("Rb87");
    model::PhysicalParams p;
    p.atom_mass = rb->mass;
    p.a_scat = rb->default_a_scat;
    p.omega = 2.0 * 3.14159265358979323846 * 30e3;
    const model::CouplingSet c = model::derive_couplings(p, renorm::beta_closed_form());
    const double u2_hz = c.u2 / model::constants::planck;
    const double u3_hz = c.u3 / model::constants::planck;
    const double t2_ms = 1e3 * model::constants::planck / c.u2;
    const bool ok = c.xi >= 0.066 && c.xi <= 0.072 && u2_hz >= 1900.0 && u2_hz <= 2100.0 && u3_hz >= -210.0 &&
                    u3_hz <= -180.0 && t2_ms >= 0.48 && t2_ms <= 0.53;
    std::snprintf(d, sizeof d, "xi = %.6f, u2/h = %.4f Hz, u3/h = %.4f Hz, t2 = %.6f ms", c.xi, u2_hz, u3_hz,
                  t2_ms);
    REPORT(ok, "rubidium reference couplings land in the expected bands", d);
  }

  // 8: with no three-body term the truncated sum must track the closed form
  {
    model::CouplingSet c;
    c.u2 = 2100.0 * model::constants::planck;
    const auto spec = dynamics::make_coherent_spec(2.5, 1e-14);
    const double t2 = model::constants::planck / c.u2;
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = 3.0 * t2 * i / 2000;
      worst = std::max(worst,
                       std::abs(dynamics::visibility(t, spec, c) - dynamics::visibility_closed_form(t, 2.5, c.u2)));
    }
    const double collapse = dynamics::visibility(0.5 * t2, spec, c);
    const bool ok = worst <= 1e-10 && std::abs(collapse - std::exp(-10.0)) <= 1e-12;
    std::snprintf(d, sizeof d, "max gap = %.3g over 3 periods; V(t2/2) - exp(-10) = %.3g", worst,
                  collapse - std::exp(-10.0));
    REPORT(ok, "two-body collapse curve matches the closed form", d);
  }

  // 9: a 1:10 coupling ratio realigns every phase after ten periods
  {
    model::CouplingSet c;
    c.u2 = 2000.0 * model::constants::planck;
    c.u3 = 200.0 * model::constants::planck;
    const auto spec = dynamics::make_coherent_spec(2.5);
    const double t2 = model::constants::planck / c.u2;
    const double v = dynamics::visibility(10.0 * t2, spec, c);
    std::snprintf(d, sizeof d, "1 - V(10 t2) = %.3g", 1.0 - v);
    REPORT(std::abs(v - 1.0) <= 1e-9, "commensurate couplings revive fully after ten periods", d);
  }

  // 10: desk-scale revival traces, 30 kHz well, xi = 0.07, nbar = 2.5.
  // Three curves on one grid: homogeneous with the induced term, envelope
  // average without it, and both effects together.
  {
    const double hw = model::constants::planck * 30000.0;
    const double xi = 0.07;
    const double beta = renorm::beta_closed_form();
    model::CouplingSet c3{xi, xi * hw, -beta * xi * xi * hw, hw};
    model::CouplingSet c2{xi, xi * hw, 0.0, hw};
    const double t2 = model::constants::planck / c3.u2;
    const double t3 = model::constants::planck / std::abs(c3.u3);
    const auto spec = dynamics::make_coherent_spec(2.5);
    const auto env = dynamics::LatticeEnvelope::make(60, 0.05, true);

    const int per_t2 = 500;
    const double dt = t2 / per_t2;
    const int n_grid = 14 * per_t2 + 1;
    std::vector<double> v3(n_grid), veps(n_grid), vcomb(n_grid);
    for (int i = 0; i < n_grid; ++i) {
      const double t = i * dt;
      v3[i] = dynamics::visibility(t, spec, c3);
      veps[i] = dynamics::averaged_visibility(t, spec, c2, env);
      vcomb[i] = dynamics::averaged_visibility(t, spec, c3, env);
    }

    // tallest sample within a quarter period of the k-th revival time
    auto peak = [&](const std::vector<double>& v, int k) {
      double m = 0.0;
      for (int i = k * per_t2 - per_t2 / 4; i <= k * per_t2 + per_t2 / 4 && i < n_grid; ++i) m = std::max(m, v[i]);
      return m;
    };

    // (a) the induced term beats the revivals down, then restores them near t3
    {
      double p[5];
      for (int k = 1; k <= 4; ++k) p[k] = peak(v3, k);
      const bool decays = p[1] >= p[2] && p[2] >= p[3] && p[3] >= p[4];
      const double pmin = std::min(std::min(p[1], p[2]), std::min(p[3], p[4]));
      const int center = static_cast<int>(std::lround(t3 / dt));
      double rec = 0.0;
      for (int i = center - per_t2 / 2; i <= center + per_t2 / 2 && i < n_grid; ++i) rec = std::max(rec, v3[i]);
      const bool recovers = rec - pmin >= 0.5 * (p[1] - pmin);
      std::snprintf(d, sizeof d, "peaks %.4f %.4f %.4f %.4f, recovery near t3 = %.4f", p[1], p[2], p[3], p[4],
                    rec);
      REPORT(decays && recovers, "beat revivals decay then recover at the three-body period", d);
    }

    // (b) count the strict local maxima of the envelope-averaged signal that
    // clear 0.1; the target is ten within 14 periods
    {
      int count = 0;
      std::vector<double> heights;
      for (int i = 1; i + 1 < n_grid; ++i)
        if (veps[i] > veps[i - 1] && veps[i] > veps[i + 1]) {
          heights.push_back(veps[i]);
          if (veps[i] > 0.1) ++count;
        }
      const double tenth = heights.size() >= 10 ? heights[9] : 0.0;
      std::snprintf(d, sizeof d, "peaks above 0.1: %d of 10 wanted; tenth peak tops out at %.6f", count, tenth);
      REPORT(count >= 10, "envelope-averaged signal keeps ten visible revivals", d);
    }

    // (c) with both mechanisms on, every early revival sits below what either
    // one alone would leave
    {
      bool ok = true;
      double worst_margin = 1.0;
      for (int k = 1; k <= 4; ++k) {
        const double cap = std::min(peak(v3, k), peak(veps, k));
        const double got = peak(vcomb, k);
        ok = ok && got < cap;
        worst_margin = std::min(worst_margin, (cap - got) / cap);
      }
      std::snprintf(d, sizeof d, "first four revivals, smallest relative undershoot = %.4f", worst_margin);
      REPORT(ok, "combined damping undercuts either mechanism alone", d);
    }
  }

  std::printf("%d check(s) failed\n", failures);
  return failures;
}
