#pragma once

// Shadowing periodic points for weighted backward shifts in the aggregated
// F-norm, separated families built from them, and the entropy lower bounds
// those families certify.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "entrolab/entropy.hpp"
#include "entrolab/operators.hpp"

namespace entrolab {

// Smallest N with 2^{-N} < eps, for 0 < eps <= 1.
int sp_constant(double eps);

struct Segment {
  int a = 0;  // first time (0-based)
  int b = 0;  // last time
  Vector y;   // orbit being shadowed on [a, b]
};

struct SegmentSchedule {
  std::vector<Segment> segments;
  int gap = 1;  // N

  // 0 <= a_1 <= b_1 < a_2 <= ... <= b_s and a_{i+1} - b_i >= N.
  void validate() const;
  int period() const;  // b_s + N
};

// Summability of sum_n (prod_{i<=n} w_i)^{-1} e_n in lp, decided by a ratio
// test on |w_{n+1}|^{-1} over the second half of a finite window.
struct Admissibility {
  bool admissible = false;
  double ratio_bound = 0.0;  // sup of |w_{n+1}|^{-1} over the tested tail
  double partial_sum = 0.0;  // sum of |prod w_i|^{-p} over the window
  double tail_bound = 0.0;   // geometric bound on the remainder when admissible
  std::string note;
};

inline constexpr std::size_t kAdmissibilityWindow = 200;

Admissibility check_admissible(const SequenceRule& weights, double p = 2.0,
                               std::size_t window = kAdmissibilityWindow);

struct SegmentDeviation {
  std::size_t segment = 0;
  double max_deviation = 0.0;  // over n in [a_i, b_i], computed part
  double tail_bound = 0.0;     // largest truncation tail over those n
  int worst_time = 0;
};

struct ShadowReport {
  Vector xi;
  int period = 0;
  std::size_t dim = 0;
  std::vector<SegmentDeviation> deviations;
  bool exactly_periodic = false;     // B^period xi == xi coordinate-wise on the window
  double periodicity_error = 0.0;    // max |(B^period xi - xi)_j| on the window
  bool admissible = false;
  double epsilon = 0.0;
  bool certified = false;  // admissible, periodic, every deviation + tail < eps
};

struct ShadowOptions {
  double epsilon = 0.1;
  // Truncation length; 0 picks max(2 * period, longest y) + period.
  std::size_t dim = 0;
};

// Builds z from the schedule (time n reads coordinate n + 1), periodizes it
// with the forward shift, and certifies the shadowing in `metric`, which
// must be an aggregated F-norm.
ShadowReport shadow_point(const Operator& shift, const SegmentSchedule& schedule,
                          const SpaceSpec& metric, const ShadowOptions& options);

struct SeparatedFamily {
  CompactSample family;            // the m^n points x_y
  std::vector<Vector> anchors;
  std::vector<std::vector<std::size_t>> tuples;  // anchor index per slot, parallel to family
  int gap = 0;                     // N = sp_constant(eps)
  int k = 1;
  int steps = 0;                   // (n - 1)(N + 1) + 1 steps of T^k
  std::size_t fallback_pairs = 0;  // pairs not separated at their first differing slot
  bool certified = false;          // every pair separated and every shadow certified

  // Family plus anchors: the compact set E of the construction.
  CompactSample with_anchors() const;
};

// For every y in anchors^n, shadows y_i at time k*i*(N+1) and checks that the
// resulting points are pairwise (steps, eps)-separated for T^k.
SeparatedFamily sp_separated_family(const Operator& shift, const std::vector<Vector>& anchors,
                                    int n, double eps, int k, const SpaceSpec& metric);

// log(m) / (k (N + 1))
double sp_entropy_lower_bound(int m, int gap, int k);

// Basis of null(A^k - I), rank threshold 1e-10 ||A^k||.
std::vector<Vector> linear_periodic_points(const Operator& op, int k);

}  // namespace entrolab
