#include "lattsite/exact_diag.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "lattsite/oscillator.hpp"

namespace lattsite::exact_diag {

namespace {

using oscillator::Mode;

// multiset of atom mode indices, sorted ascending, one byte each
uint64_t pack(const std::vector<int>& atoms) {
  uint64_t key = 0;
  for (size_t i = 0; i < atoms.size(); ++i) key |= static_cast<uint64_t>(atoms[i]) << (8 * i);
  return key;
}

void enumerate_basis(int n_atoms, int n_modes, std::vector<std::vector<int>>& basis) {
  std::vector<int> cur(n_atoms, 0);
  while (true) {
    basis.push_back(cur);
    int i = n_atoms - 1;
    while (i >= 0 && cur[i] == n_modes - 1) --i;
    if (i < 0) break;
    const int v = cur[i] + 1;
    for (int j = i; j < n_atoms; ++j) cur[j] = v;
  }
}

// one-axis four-index overlap table, indices 0..cutoff
struct AxisTable {
  explicit AxisTable(int cutoff) : n(cutoff + 1), v(static_cast<size_t>(n) * n * n * n) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) v[idx(a, b, c, d)] = oscillator::overlap4(a, b, c, d);
  }
  size_t idx(int a, int b, int c, int d) const {
    return ((static_cast<size_t>(a) * n + b) * n + c) * n + d;
  }
  double operator()(int a, int b, int c, int d) const { return v[idx(a, b, c, d)]; }
  int n;
  std::vector<double> v;
};

}  // namespace

EdResult exact_diag_oracle(int n_atoms, int cutoff, double xi, const EdOptions& options) {
  if (n_atoms < 1 || n_atoms > 8) throw std::invalid_argument("exact_diag_oracle: n_atoms must be in [1, 8]");
  if (cutoff < 0) throw std::invalid_argument("exact_diag_oracle: cutoff must be >= 0");
  const auto modes = oscillator::enumerate_modes(cutoff);
  const int n_modes = static_cast<int>(modes.size());

  std::vector<std::vector<int>> basis;
  enumerate_basis(n_atoms, n_modes, basis);
  const int dim = static_cast<int>(basis.size());
  if (dim > options.max_dimension)
    throw std::invalid_argument("exact_diag_oracle: basis dimension exceeds max_dimension");

  std::unordered_map<uint64_t, int> row_of;
  row_of.reserve(static_cast<size_t>(dim) * 2);
  for (int r = 0; r < dim; ++r) row_of.emplace(pack(basis[r]), r);
  const int ground_row = row_of.at(pack(std::vector<int>(n_atoms, 0)));

  const AxisTable axis(cutoff);
  // per-mode parity mask, one bit per axis; the interaction element vanishes
  // unless creation and annihilation pairs carry the same mask
  std::vector<int> parity(n_modes);
  std::vector<int> quanta(n_modes);
  for (int m = 0; m < n_modes; ++m) {
    parity[m] = (modes[m].x & 1) | ((modes[m].y & 1) << 1) | ((modes[m].z & 1) << 2);
    quanta[m] = modes[m].quanta();
  }
  auto element = [&](int mu, int nu, int ga, int de) {
    return axis(modes[mu].x, modes[nu].x, modes[ga].x, modes[de].x) *
           axis(modes[mu].y, modes[nu].y, modes[ga].y, modes[de].y) *
           axis(modes[mu].z, modes[nu].z, modes[ga].z, modes[de].z);
  };

  const double u2 = xi;
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<int> occ_mode;
  std::vector<int> occ_count;
  std::vector<int> reduced;
  std::vector<int> target(n_atoms);
  for (int s = 0; s < dim; ++s) {
    const auto& atoms = basis[s];
    double e0 = 0.0;
    for (int a : atoms) e0 += quanta[a];
    trips.emplace_back(s, s, e0);
    if (n_atoms < 2) continue;

    occ_mode.clear();
    occ_count.clear();
    for (int a : atoms) {
      if (!occ_mode.empty() && occ_mode.back() == a) {
        ++occ_count.back();
      } else {
        occ_mode.push_back(a);
        occ_count.push_back(1);
      }
    }
    const int n_occ = static_cast<int>(occ_mode.size());
    for (int gi = 0; gi < n_occ; ++gi) {
      for (int di = 0; di < n_occ; ++di) {
        const int ga = occ_mode[gi];
        const int de = occ_mode[di];
        const int avail = occ_count[di] - (gi == di ? 1 : 0);
        if (avail < 1) continue;
        const double ann = std::sqrt(static_cast<double>(occ_count[gi]) * avail);
        // remaining atoms after removing one from ga and one from de
        reduced.clear();
        int skip_g = 1, skip_d = 1;
        for (int a : atoms) {
          if (a == ga && skip_g) {
            skip_g = 0;
            continue;
          }
          if (a == de && skip_d) {
            skip_d = 0;
            continue;
          }
          reduced.push_back(a);
        }
        const int want_parity = parity[ga] ^ parity[de];
        for (int mu = 0; mu < n_modes; ++mu) {
          for (int nu = 0; nu < n_modes; ++nu) {
            if ((parity[mu] ^ parity[nu]) != want_parity) continue;
            // creation amplitudes on the reduced state
            int n_nu = 0;
            for (int a : reduced) n_nu += (a == nu);
            int n_mu = (mu == nu ? n_nu + 1 : 0);
            if (mu != nu)
              for (int a : reduced) n_mu += (a == mu);
            const double cre = std::sqrt(static_cast<double>(n_nu + 1) * (n_mu + 1));
            // sorted target multiset
            target.assign(reduced.begin(), reduced.end());
            target.push_back(std::min(mu, nu));
            target.push_back(std::max(mu, nu));
            std::sort(target.begin(), target.end());
            const int t = row_of.at(pack(target));
            if (t < s) continue;  // keep upper triangle only
            trips.emplace_back(s, t, 0.5 * u2 * element(mu, nu, ga, de) * ann * cre);
          }
        }
      }
    }
  }

  Eigen::SparseMatrix<double> H(dim, dim);
  H.setFromTriplets(trips.begin(), trips.end());
  trips.clear();
  trips.shrink_to_fit();

  EdResult out;
  out.dimension = dim;

  if (dim <= options.dense_threshold) {
    Eigen::MatrixXd full = Eigen::MatrixXd(H).selfadjointView<Eigen::Upper>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(full);
    if (solver.info() != Eigen::Success) throw std::runtime_error("exact_diag_oracle: dense solve failed");
    int best = 0;
    double best_ov = -1.0;
    for (int i = 0; i < dim; ++i) {
      const double ov = std::abs(solver.eigenvectors()(ground_row, i));
      if (ov > best_ov) {
        best_ov = ov;
        best = i;
      }
    }
    out.energy = solver.eigenvalues()(best);
    out.ground_overlap = best_ov;
    out.converged = true;
    return out;
  }

  // Lanczos on the sparse matrix, started from the all-ground basis vector,
  // with full reorthogonalization; tracks the Ritz pair that carries the
  // largest weight of the start vector.
  const auto Hview = H.selfadjointView<Eigen::Upper>();
  const int kmax = std::min(options.max_iterations, dim);
  std::vector<Eigen::VectorXd> q;
  q.reserve(static_cast<size_t>(kmax) + 1);
  Eigen::VectorXd q0 = Eigen::VectorXd::Zero(dim);
  q0(ground_row) = 1.0;
  q.push_back(q0);
  std::vector<double> alpha;
  std::vector<double> beta;

  double ritz_energy = 0.0;
  double ritz_ground = 1.0;
  Eigen::VectorXd ritz_coeffs;
  bool converged = false;
  int used = 0;

  auto solve_tridiag = [&](bool final_pass) {
    const int k = static_cast<int>(alpha.size());
    Eigen::VectorXd d(k), e(std::max(k - 1, 0));
    for (int i = 0; i < k; ++i) d(i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) e(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(d, e);
    int best = 0;
    double best_w = -1.0;
    for (int i = 0; i < k; ++i) {
      const double w = std::abs(tri.eigenvectors()(0, i));
      if (w > best_w) {
        best_w = w;
        best = i;
      }
    }
    ritz_energy = tri.eigenvalues()(best);
    ritz_ground = best_w;
    ritz_coeffs = tri.eigenvectors().col(best);
    if (final_pass) return true;
    // beta[k-1], when present, couples the Krylov space to the next vector
    const double tail = static_cast<int>(beta.size()) >= k ? beta[k - 1] : 0.0;
    const double resid = std::abs(tail * ritz_coeffs(k - 1));
    return resid <= options.tolerance * std::max(1.0, std::abs(ritz_energy));
  };

  for (int k = 0; k < kmax; ++k) {
    Eigen::VectorXd w = Hview * q[k];
    if (k > 0) w -= beta[k - 1] * q[k - 1];
    const double a = q[k].dot(w);
    alpha.push_back(a);
    w -= a * q[k];
    // two reorthogonalization sweeps
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& qq : q) w -= qq.dot(w) * qq;
    const double b = w.norm();
    used = k + 1;
    if (b < 1e-13) {
      // invariant subspace exhausted; the tridiagonal solve is now exact
      solve_tridiag(true);
      converged = true;
      break;
    }
    beta.push_back(b);
    if ((k + 1) % 5 == 0 || k + 1 == kmax) {
      if (solve_tridiag(false)) {
        converged = true;
        break;
      }
    }
    q.push_back(w / b);
  }
  if (!converged) solve_tridiag(true);

  Eigen::VectorXd full_vec = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < static_cast<int>(ritz_coeffs.size()) && i < static_cast<int>(q.size()); ++i)
    full_vec += ritz_coeffs(i) * q[i];
  out.energy = ritz_energy;
  out.ground_overlap = std::abs(full_vec(ground_row));
  out.iterations = used;
  out.converged = converged;
  return out;
}

}  // namespace lattsite::exact_diag
