#pragma once

// Spectra of operator descriptions, the mini-norm, and the splitting of a
// finite-dimensional operator into unstable / center / stable blocks.

#include <optional>
#include <string>
#include <vector>

#include "entrolab/operators.hpp"

namespace entrolab {

struct Eigenvalue {
  Complex value;
  int multiplicity = 1;
  // log|value|, tracked separately so powers and scalings stay exact in log
  // space (log|l^m| = m log|l|).
  double log_modulus = 0.0;
  // |det(A - l I)| for d <= 6, ||(A - l I) v|| otherwise; 0 for closed forms.
  double residual = 0.0;
};

enum class Provenance { closed_form, numeric };

// Spectrum of a shift given as a disc of radius `radius`: the open disc is
// point spectrum, the closed disc is the spectrum.
struct SpectralRegion {
  double radius = 0.0;
  std::string note;
};

struct SpectralData {
  std::vector<Eigenvalue> eigenvalues;
  Provenance provenance = Provenance::closed_form;
  double residual_tol = 0.0;
  double spectral_radius = 0.0;
  // True when the list exhausts the nonzero spectrum.
  bool complete = true;
  // Certified sup |l| over spectrum not in the list.
  double tail_sup = 0.0;
  // 0 is in the spectrum as an accumulation point (compact infinite rank).
  bool zero_accumulation = false;
  std::optional<SpectralRegion> region;
};

// Generated diagonals are listed at least this far.
inline constexpr std::size_t kListedPrefix = 8;

SpectralData spectrum(const Operator& op);

// Multisets equal up to `tol` after matching (used by tests and verify).
bool same_eigenvalues(const std::vector<Eigenvalue>& a, const std::vector<Eigenvalue>& b,
                      double tol);

// m(A) = inf{||Ax|| : ||x|| = 1} in the Euclidean norm: the smallest
// singular value, equal to 1/||A^{-1}||.
double mini_norm(const Operator& op);

struct InvariantBlock {
  Matrix basis;   // d x k, orthonormal columns
  Matrix matrix;  // k x k, restriction of A to span(basis)
  std::vector<Complex> eigenvalues;
  Eigen::Index dim() const { return basis.cols(); }
};

struct Splitting {
  InvariantBlock unstable;
  InvariantBlock center;
  InvariantBlock stable;
  Matrix change_of_basis;  // [U C S]
  Matrix change_of_basis_inv;
  double block_residual = 0.0;
  // max over generalized eigenspaces of sigma_k((A - l I)^k) / ||(A - l I)^k||
  double chain_residual = 0.0;

  struct Components {
    ColumnVector unstable, center, stable;
  };
  Components components(const ColumnVector& x) const;
};

inline constexpr double kDefaultCircleTol = 1e-6;

// Eigenvalues with ||l| - 1| <= tol/2 are center, > tol are hyperbolic;
// anything in between is rejected as ambiguous.
Splitting riesz_split(const Operator& op, double circle_tol = kDefaultCircleTol);

}  // namespace entrolab
