#include "lattsite/oscillator.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace lattsite::oscillator {

namespace {

// Gauss-Hermite nodes and weights for weight exp(-x^2), largest root first.
// Newton iteration on the recurrence; standard construction.
void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
  constexpr double kPiQuarterRoot = 0.7511255444649425;  // pi^(-1/4)
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = kPiQuarterRoot;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
}

// Normalized Hermite polynomial h_j(u) = H_j(u) / sqrt(2^j j!), evaluated by
// the stable recurrence h_{j+1} = u sqrt(2/(j+1)) h_j - sqrt(j/(j+1)) h_{j-1}.
double normalized_hermite(int j, double u) {
  double hm = 0.0;
  double h = 1.0;
  for (int k = 0; k < j; ++k) {
    const double hn = u * std::sqrt(2.0 / (k + 1)) * h - std::sqrt(static_cast<double>(k) / (k + 1)) * hm;
    hm = h;
    h = hn;
  }
  return h;
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// (2s-1)!! as a double; exact for s <= 14 or so.
double double_factorial_odd(int s) {
  double r = 1.0;
  for (int i = 1; i <= s; ++i) r *= 2.0 * i - 1.0;
  return r;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

std::vector<Mode> enumerate_modes(int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("enumerate_modes: cutoff must be >= 0");
  std::vector<Mode> out;
  for (int x = 0; x <= cutoff; ++x)
    for (int y = 0; y + x <= cutoff; ++y)
      for (int z = 0; z + y + x <= cutoff; ++z) out.push_back(Mode{x, y, z});
  return out;
}

double k1d_quadrature(int m, int n, int nodes) {
  if (m < 0 || n < 0) throw std::invalid_argument("k1d_quadrature: indices must be >= 0");
  if (nodes < 2) throw std::invalid_argument("k1d_quadrature: need at least 2 nodes");
  std::vector<double> x, w;
  gauss_hermite(nodes, x, w);
  // integral over u of phi_m phi_n phi_0^2 with phi_j the unit-frequency
  // oscillator eigenfunctions; substituting v = sqrt(2) u maps the total
  // Gaussian exp(-2u^2) onto the exp(-v^2) weight.
  constexpr double kInvSqrtPi = 0.5641895835477563;
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double u = x[i] / std::numbers::sqrt2;
    acc += w[i] * normalized_hermite(m, u) * normalized_hermite(n, u);
  }
  return kInvSqrtPi * acc;
}

double k1d(int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("k1d: indices must be >= 0");
  if ((m + n) % 2 != 0) return 0.0;
  const int half = (m + n) / 2;
  if (m + n <= 24) {
    // Alternating sum with exact integer terms: sum_k (-1)^(half-k)
    // C(m,k) C(n,k) k! 2^k (2(half-k)-1)!!, all below 2^53 for m+n <= 24.
    double num = 0.0;
    double kfact_2k = 1.0;  // k! 2^k
    for (int k = 0; k <= std::min(m, n); ++k) {
      if (k > 0) kfact_2k *= 2.0 * k;
      const int s = half - k;
      const double term = binom(m, k) * binom(n, k) * kfact_2k * double_factorial_odd(s);
      num = (s % 2 == 0) ? num + term : num - term;
    }
    double fm = 1.0, fn = 1.0;
    for (int i = 2; i <= m; ++i) fm *= i;
    for (int i = 2; i <= n; ++i) fn *= i;
    return num / (std::ldexp(1.0, half) * std::sqrt(fm * fn));
  }
  // Large indices: same sum with log-magnitude terms. Loses relative
  // precision from cancellation when m ~ n, which nothing downstream relies
  // on; the (2m, 0) family used at large cutoffs is the single-term branch.
  if (m == 0 || n == 0) {
    // single term: k1d(2s, 0) = (-1)^s sqrt((2s)!) / (4^s s!)
    const int big = m + n;
    const double lg = 0.5 * log_factorial(big) - 2.0 * half * std::numbers::ln2 - log_factorial(half);
    const double mag = std::exp(lg);
    return (half % 2 == 0) ? mag : -mag;
  }
  double acc = 0.0;
  for (int k = 0; k <= std::min(m, n); ++k) {
    const int s = half - k;
    double lt = log_factorial(m) - log_factorial(k) - log_factorial(m - k);
    lt += log_factorial(n) - log_factorial(k) - log_factorial(n - k);
    lt += log_factorial(k) + k * std::numbers::ln2;
    lt += log_factorial(2 * s) - s * std::numbers::ln2 - log_factorial(s);
    const double term = std::exp(lt - half * std::numbers::ln2 - 0.5 * (log_factorial(m) + log_factorial(n)));
    acc = (s % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

double overlap4(int a, int b, int c, int d) {
  if (a < 0 || b < 0 || c < 0 || d < 0) throw std::invalid_argument("overlap4: indices must be >= 0");
  const int total = a + b + c + d;
  if (total % 2 != 0) return 0.0;
  // Multiply the four Hermite polynomials literally, then integrate the
  // monomials against exp(-2u^2): int u^{2t} e^{-2u^2} = sqrt(pi/2) (2t-1)!!/4^t.
  auto hermite_coeffs = [](int nn) {
    std::vector<double> c(static_cast<size_t>(nn) + 1, 0.0);
    std::vector<double> prev;  // H_{nn-1}
    std::vector<double> pprev; // H_{nn-2}
    for (int j = 0; j <= nn; ++j) {
      std::vector<double> cur(static_cast<size_t>(j) + 1, 0.0);
      if (j == 0) {
        cur[0] = 1.0;
      } else {
        for (size_t i = 0; i < prev.size(); ++i) cur[i + 1] += 2.0 * prev[i];
        for (size_t i = 0; i < pprev.size(); ++i) cur[i] -= 2.0 * (j - 1) * pprev[i];
      }
      pprev = prev;
      prev = cur;
      if (j == nn) c = cur;
    }
    return c;
  };
  auto poly_mul = [](const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> r(p.size() + q.size() - 1, 0.0);
    for (size_t i = 0; i < p.size(); ++i)
      for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
  };
  std::vector<double> prod = hermite_coeffs(a);
  prod = poly_mul(prod, hermite_coeffs(b));
  prod = poly_mul(prod, hermite_coeffs(c));
  prod = poly_mul(prod, hermite_coeffs(d));
  double acc = 0.0;
  double moment = 1.0;  // (2t-1)!! / 4^t, t = 0
  for (int t = 0; 2 * t < static_cast<int>(prod.size()); ++t) {
    if (t > 0) moment *= (2.0 * t - 1.0) / 4.0;
    acc += prod[static_cast<size_t>(2 * t)] * moment;
  }
  // each wavefunction carries (2^j j!)^{-1/2}; the remaining Gaussian
  // prefactors cancel against the (0,0,0,0) reference, which this
  // convention fixes to exactly 1.
  double norm = std::ldexp(1.0, total);
  for (int j : {a, b, c, d})
    for (int i = 2; i <= j; ++i) norm *= i;
  return acc / std::sqrt(norm);
}

double K3d(const Mode& mu, const Mode& nu) {
  return overlap4(mu.x, nu.x, 0, 0) * overlap4(mu.y, nu.y, 0, 0) * overlap4(mu.z, nu.z, 0, 0);
}

MatrixElementTable::MatrixElementTable(int cutoff) : cutoff_(cutoff), modes_(enumerate_modes(cutoff)) {
  const size_t n = modes_.size();
  // cache the 1-D factors once; the 3-D element is a product of three
  std::vector<double> k1(static_cast<size_t>(cutoff + 1) * (cutoff + 1), 0.0);
  for (int m = 0; m <= cutoff; ++m)
    for (int mn = 0; mn <= cutoff; ++mn) k1[static_cast<size_t>(m) * (cutoff + 1) + mn] = k1d(m, mn);
  table_.assign(n * n, 0.0);
  auto f = [&](int m, int mn) { return k1[static_cast<size_t>(m) * (cutoff_ + 1) + mn]; };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      table_[i * n + j] = f(modes_[i].x, modes_[j].x) * f(modes_[i].y, modes_[j].y) * f(modes_[i].z, modes_[j].z);
}

double shell_weight_closed_form(int e) {
  if (e < 0) throw std::invalid_argument("shell_weight_closed_form: e must be >= 0");
  if (e % 2 != 0) return 0.0;
  // C(e, e/2) / 2^e, evaluated without overflow
  double r = 1.0;
  const int h = e / 2;
  for (int i = 1; i <= h; ++i) r = r * (h + i) / i / 4.0;
  return r;
}

}  // namespace lattsite::oscillator
