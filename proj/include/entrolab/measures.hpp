#pragma once

// Invariant measures carried by periodic orbits of finite-dimensional linear
// maps, and the gap between topological entropy and what those measures see.

#include <cstddef>
#include <string>
#include <vector>

#include "entrolab/operators.hpp"
#include "entrolab/spectrum.hpp"

namespace entrolab {

struct Atom {
  Vector point;
  double mass = 0.0;
};

struct OrbitMeasure {
  std::vector<Atom> atoms;
  int period = 1;
  std::string operator_id;

  // Masses positive and summing to 1 within 1e-12.
  void validate() const;
};

inline constexpr double kPeriodicTol = 1e-10;

// Uniform measure on {x, Ax, ..., A^{k-1} x}. Requires
// ||A^k x - x|| < 1e-10 (1 + ||x||) in the Euclidean norm.
OrbitMeasure orbit_measure(const Operator& a, const Vector& x, int k);

struct InvarianceReport {
  bool invariant = false;
  double max_mismatch = 0.0;  // worst distance from A * atom to its matched atom
};

// The atom multiset is mapped onto itself by A, up to tol (1 + ||atom||).
InvarianceReport check_invariance(const Operator& a, const OrbitMeasure& mu, double tol = kPeriodicTol);

struct MetricEntropy {
  double value = 0.0;
  std::string certificate;
};

// Entropy of a measure on one periodic orbit, which is 0.
MetricEntropy metric_entropy_periodic(const OrbitMeasure& mu);

struct SupportReport {
  bool in_center = false;
  double max_offending = 0.0;  // largest unstable or stable component norm
  std::size_t worst_atom = 0;
};

SupportReport support_in_center(const OrbitMeasure& mu, const Splitting& split, double tol);

inline constexpr std::size_t kGapMaxDim = 8;
inline constexpr double kCenterTol = 1e-9;

struct GapReport {
  double h_top = 0.0;
  double best_h_mu = 0.0;
  double gap = 0.0;
  int periods_searched = 0;
  std::size_t center_dim = 0;
  std::size_t periodic_points = 0;  // sampled points, counting 0
  bool all_in_center = false;
  double max_offending = 0.0;
  std::string scope;
};

// h_top from the spectrum, every sampled periodic-orbit measure for periods
// up to `search_periods`, and the support check against the center subspace.
GapReport variational_gap(const Operator& a, int search_periods);

}  // namespace entrolab
