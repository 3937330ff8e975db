#pragma once

namespace lattsite::exact_diag {

struct EdOptions {
  int max_dimension = 12000;
  int max_iterations = 600;
  double tolerance = 1e-12;
  // dimensions at or below this use a dense solver; above it, Lanczos with
  // full reorthogonalization. Tests set 0 to force the Lanczos path.
  int dense_threshold = 800;
};

struct EdResult {
  double energy = 0.0;          // eigenvalue in hbar*omega units, zero-point excluded
  double ground_overlap = 0.0;  // |<all-ground | eigenstate>|
  int dimension = 0;
  int iterations = 0;  // 0 for the dense path
  bool converged = false;
};

// Diagonalizes n_atoms interacting bosons on one site with single-particle
// modes truncated at E_mu <= cutoff and bare contact coupling u2 = xi (in
// hbar*omega units), no counterterm. Returns the eigenstate with maximal
// overlap on the all-ground configuration. Energies exclude the zero-point
// constant, so the noninteracting ground state sits at 0.
EdResult exact_diag_oracle(int n_atoms, int cutoff, double xi, const EdOptions& options = {});

}  // namespace lattsite::exact_diag
