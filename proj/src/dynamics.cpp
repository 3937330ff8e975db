#include "lattsite/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace lattsite::dynamics {

namespace {

void require_spec(const CoherentStateSpec& spec) {
  if (!(spec.nbar >= 0.0)) throw std::invalid_argument("nbar must be >= 0");
  if (spec.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (!(spec.tail_tol > 0.0)) throw std::invalid_argument("tail_tol must be > 0");
}

std::complex<double> amplitude_with(double t, const CoherentStateSpec& spec, double u2, double u3,
                                    double hbar_omega) {
  model::CouplingSet c;
  c.u2 = u2;
  c.u3 = u3;
  c.hbar_omega = hbar_omega;
  double re = 0.0;
  double im = 0.0;
  double p = std::exp(-spec.nbar);  // Poisson weight, n = 0
  for (int n = 0; n <= spec.n_max; ++n) {
    if (n > 0) p *= spec.nbar / n;
    const double phase = model::energy_gap(n, c) * t / model::constants::hbar;
    re += p * std::cos(phase);
    im -= p * std::sin(phase);
  }
  return {re, im};
}

}  // namespace

int truncation_bound(double nbar, double tail_tol) {
  if (!(nbar >= 0.0)) throw std::invalid_argument("truncation_bound: nbar must be >= 0");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("truncation_bound: tail_tol must be > 0");
  double p = std::exp(-nbar);
  double cum = p;
  int n = 0;
  while (1.0 - cum > tail_tol && n < 4000) {
    ++n;
    p *= nbar / n;
    cum += p;
  }
  return std::max(n, 1);
}

CoherentStateSpec make_coherent_spec(double nbar, double tail_tol) {
  CoherentStateSpec spec;
  spec.nbar = nbar;
  spec.tail_tol = tail_tol;
  spec.n_max = truncation_bound(nbar, tail_tol);
  require_spec(spec);
  return spec;
}

std::complex<double> amplitude(double t, const CoherentStateSpec& spec, const model::CouplingSet& c) {
  require_spec(spec);
  return amplitude_with(t, spec, c.u2, c.u3, c.hbar_omega);
}

double visibility(double t, const CoherentStateSpec& spec, const model::CouplingSet& c) {
  const auto a = amplitude(t, spec, c);
  return a.real() * a.real() + a.imag() * a.imag();
}

double visibility_closed_form(double t, double nbar, double u2) {
  const double theta = u2 * t / model::constants::hbar;
  return std::exp(-2.0 * nbar * (1.0 - std::cos(theta)));
}

LatticeEnvelope LatticeEnvelope::make(int diameter_sites, double eps, bool scale_u3) {
  if (diameter_sites < 1) throw std::invalid_argument("diameter_sites must be >= 1");
  if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("eps must be in [0, 1)");
  LatticeEnvelope env;
  env.diameter_sites = diameter_sites;
  env.eps = eps;
  env.scale_u3 = scale_u3;
  const int smax = diameter_sites * diameter_sites / 4;
  env.shell_counts.assign(static_cast<size_t>(smax) + 1, 0);
  const int reach = diameter_sites / 2;
  for (int i = -reach; i <= reach; ++i)
    for (int j = -reach; j <= reach; ++j)
      for (int k = -reach; k <= reach; ++k) {
        const int s = i * i + j * j + k * k;
        if (s <= smax) {
          ++env.shell_counts[static_cast<size_t>(s)];
          ++env.total_sites;
        }
      }
  return env;
}

double averaged_visibility(double t, const CoherentStateSpec& spec, const model::CouplingSet& c,
                           const LatticeEnvelope& env) {
  require_spec(spec);
  if (env.total_sites <= 0) throw std::invalid_argument("averaged_visibility: empty envelope");
  if (env.eps == 0.0) return visibility(t, spec, c);
  const double d2 = static_cast<double>(env.diameter_sites) * env.diameter_sites;
  double re = 0.0;
  double im = 0.0;
  for (size_t s = 0; s < env.shell_counts.size(); ++s) {
    if (env.shell_counts[s] == 0) continue;
    const double factor = 1.0 - env.eps * (4.0 * static_cast<double>(s)) / d2;
    const double u2 = c.u2 * factor;
    const double u3 = env.scale_u3 ? c.u3 * factor * factor : c.u3;
    const auto a = amplitude_with(t, spec, u2, u3, c.hbar_omega);
    re += static_cast<double>(env.shell_counts[s]) * a.real();
    im += static_cast<double>(env.shell_counts[s]) * a.imag();
  }
  re /= static_cast<double>(env.total_sites);
  im /= static_cast<double>(env.total_sites);
  return re * re + im * im;
}

VisibilityTrace trace(std::span<const double> times, const CoherentStateSpec& spec, const model::CouplingSet& c,
                      const TraceOptions& options) {
  if (times.empty()) throw std::invalid_argument("trace: time grid must be non-empty");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("trace: time grid must be strictly increasing");
  require_spec(spec);
  VisibilityTrace out;
  out.times.assign(times.begin(), times.end());
  out.visibility.reserve(times.size());
  for (double t : times) out.visibility.push_back(visibility(t, spec, c));
  if (options.with_closed_form) {
    out.closed_form.reserve(times.size());
    for (double t : times) out.closed_form.push_back(visibility_closed_form(t, spec.nbar, c.u2));
  }
  if (options.envelope) {
    out.averaged.reserve(times.size());
    for (double t : times) out.averaged.push_back(averaged_visibility(t, spec, c, *options.envelope));
  }
  return out;
}

}  // namespace lattsite::dynamics
