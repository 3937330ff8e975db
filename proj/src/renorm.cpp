#include "lattsite/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lattsite/oscillator.hpp"

namespace lattsite::renorm {

namespace {

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Per-axis shell weights w[e] for even e up to cutoff, then the 3-axis
// convolution summed shell by shell in increasing total energy.
double shell_sum(int cutoff, const std::vector<double>& w) {
  Kahan acc;
  for (int total = 2; total <= cutoff; total += 2) {
    Kahan shell;
    for (int e1 = 0; e1 <= total; e1 += 2)
      for (int e2 = 0; e1 + e2 <= total; e2 += 2) shell.add(w[e1] * w[e2] * w[total - e1 - e2]);
    acc.add(shell.sum / total);
  }
  return acc.sum;
}

std::vector<double> pair_axis_weights(int cutoff) {
  // sum over m+n == e of k1d(m,n)^2 == C(e, e/2) / 2^e
  std::vector<double> w(static_cast<size_t>(cutoff) + 1, 0.0);
  w[0] = 1.0;
  for (int s = 1; 2 * s <= cutoff; ++s) w[2 * s] = w[2 * s - 2] * (2.0 * s - 1.0) / (2.0 * s);
  return w;
}

std::vector<double> ground_axis_weights(int cutoff) {
  // k1d(e, 0)^2 == C(e, e/2) / 4^e
  std::vector<double> w(static_cast<size_t>(cutoff) + 1, 0.0);
  w[0] = 1.0;
  for (int s = 1; 2 * s <= cutoff; ++s) w[2 * s] = w[2 * s - 2] * (2.0 * s - 1.0) / (8.0 * s);
  return w;
}

void require_cutoff(int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
}

}  // namespace

double three_body_channel_sum(int cutoff) {
  require_cutoff(cutoff);
  return shell_sum(cutoff, ground_axis_weights(cutoff));
}

double two_body_channel_sum(int cutoff) {
  require_cutoff(cutoff);
  return shell_sum(cutoff, pair_axis_weights(cutoff));
}

double beta(int cutoff) { return 6.0 * three_body_channel_sum(cutoff); }

double beta_closed_form() {
  // 6 * (log(4 / (2 + sqrt(3))) + 2 / sqrt(3) - 1), the cutoff -> infinity
  // limit of beta(cutoff)
  const double r3 = std::sqrt(3.0);
  return 6.0 * (std::log(4.0 / (2.0 + r3)) + 2.0 / r3 - 1.0);
}

double delta_u3(int cutoff, double u2) {
  // multiplication order keeps delta_u3(cutoff, 2*u2) == 4*delta_u3(cutoff, u2) exact
  return -((6.0 * three_body_channel_sum(cutoff)) * u2) * u2;
}

double counterterm(int cutoff, double u2) { return (two_body_channel_sum(cutoff) * u2) * u2; }

double raw_second_order_shift(int n, int cutoff, double u2) {
  if (n < 0) throw std::invalid_argument("raw_second_order_shift: n must be >= 0");
  require_cutoff(cutoff);
  const double pairs = n * (n - 1) / 2;
  const double triples = n * (n - 1) * (n - 2);
  return -(counterterm(cutoff, u2) * pairs) + delta_u3(cutoff, u2) * triples / 6.0;
}

double renormalized_shift(int n, int cutoff, double u2) {
  if (n < 0) throw std::invalid_argument("renormalized_shift: n must be >= 0");
  const double pairs = n * (n - 1) / 2;
  return raw_second_order_shift(n, cutoff, u2) + counterterm(cutoff, u2) * pairs;
}

double mode_truncated_second_order_shift(int n, int cutoff, double u2) {
  if (n < 0) throw std::invalid_argument("mode_truncated_second_order_shift: n must be >= 0");
  require_cutoff(cutoff);
  const auto modes = oscillator::enumerate_modes(cutoff);
  const oscillator::MatrixElementTable table(cutoff);
  Kahan q2;
  Kahan q3;
  for (size_t i = 0; i < modes.size(); ++i) {
    for (size_t j = 0; j < modes.size(); ++j) {
      const int e = modes[i].quanta() + modes[j].quanta();
      if (e == 0) continue;
      const double k = table.value(static_cast<int>(i), static_cast<int>(j));
      q2.add(k * k / e);
    }
    if (modes[i].quanta() > 0) {
      const double k = table.value(static_cast<int>(i), 0);
      q3.add(k * k / modes[i].quanta());
    }
  }
  const double pairs = n * (n - 1) / 2;
  const double triples = n * (n - 1) * (n - 2);
  return -((q2.sum * pairs + q3.sum * triples) * u2) * u2;
}

double fit_power_law_exponent(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_power_law_exponent: need matching spans with >= 2 points");
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0)
      throw std::invalid_argument("fit_power_law_exponent: points must be positive");
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_power_law_exponent: x values must differ");
  return (n * sxy - sx * sy) / denom;
}

double divergence_exponent(std::span<const int> cutoffs) {
  std::vector<int> sorted(cutoffs.begin(), cutoffs.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() < 4) throw std::invalid_argument("divergence_exponent: need at least 4 distinct cutoffs");
  if (sorted.back() < 40) throw std::invalid_argument("divergence_exponent: largest cutoff must be >= 40");
  std::vector<double> xs, ys;
  for (int c : sorted) {
    xs.push_back(c);
    ys.push_back(two_body_channel_sum(c));
  }
  return fit_power_law_exponent(xs, ys);
}

PerturbationSummary summarize(int cutoff) {
  require_cutoff(cutoff);
  PerturbationSummary out;
  out.cutoff = cutoff;
  out.s3 = three_body_channel_sum(cutoff);
  out.beta = 6.0 * out.s3;
  out.counterterm = two_body_channel_sum(cutoff);
  out.raw_two_body_sum = -out.counterterm;
  return out;
}

}  // namespace lattsite::renorm
