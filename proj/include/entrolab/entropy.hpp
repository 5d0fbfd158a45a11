#pragma once

// Bowen (n, eps)-separated sets on finite samples, growth-rate fits, and the
// closed-form entropy sum over eigenvalues outside the unit disc.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entrolab/operators.hpp"
#include "entrolab/spectrum.hpp"

namespace entrolab {

// Finite sample of a compact set. `resolution` is the Euclidean covering
// radius the caller claims for the sample (0: none claimed); it is recorded,
// not checked, and drives the resolution-limited flag of sn_table.
struct CompactSample {
  std::vector<Vector> points;
  double resolution = 0.0;
  std::string label;

  // Validates: nonempty, one space, pairwise distinct.
  static CompactSample make(std::vector<Vector> points, double resolution, std::string label = {});
  std::size_t size() const { return points.size(); }
};

// Uniform grid {0, 1/(m-1), ..., 1}^d on the real unit cube.
CompactSample unit_cube_grid(std::size_t dim, std::size_t per_axis, std::string label = {});

// max_{0 <= i < n} d(T^i x, T^i y)
double dyn_distance(const Operator& op, const Vector& x, const Vector& y, int n, const SpaceSpec& s);

// Maximal (n, eps)-separated subset: scan points in lexicographic order and
// keep each one whose dynamical distance to every kept point exceeds eps.
std::vector<Vector> greedy_separated(const Operator& op, const CompactSample& k, int n, double eps,
                                     const SpaceSpec& s);

inline constexpr std::size_t kExactSampleCap = 24;

// Maximum (n, eps)-separated subset: maximum independent set of the graph
// joining points at dynamical distance <= eps. |K| <= 24.
std::vector<Vector> max_separated_exact(const Operator& op, const CompactSample& k, int n,
                                        double eps, const SpaceSpec& s);

enum class CountMethod { greedy, exact };

struct TableEntry {
  int n = 0;
  double epsilon = 0.0;
  std::size_t count = 0;      // after monotonicity repair
  std::size_t raw_count = 0;  // as computed
  bool saturated = false;
  // 2 * resolution * max_{i<n} ||T^i|| > eps / 4: the sample is too coarse
  // for this cell, so the count is only bracketed loosely.
  bool resolution_limited = false;
};

inline constexpr double kSaturationFraction = 0.95;
inline constexpr double kResolutionFraction = 0.25;

struct EntropyTable {
  std::vector<int> n_values;       // ascending
  std::vector<double> epsilons;    // descending
  std::vector<TableEntry> entries; // row-major over (epsilon, n)
  std::size_t sample_size = 0;
  std::string operator_id;
  std::string sample_id;
  CountMethod method = CountMethod::greedy;
  bool repaired = false;
  // max_{i<n} ||T^i|| per n, empty when no operator norm is available
  std::vector<double> dilation;

  const TableEntry& at(int n, double eps) const;
  std::size_t count(int n, double eps) const { return at(n, eps).count; }
};

struct TableOptions {
  CountMethod method = CountMethod::greedy;
  unsigned threads = 1;
};

EntropyTable sn_table(const Operator& op, const CompactSample& k, std::vector<int> n_values,
                      std::vector<double> epsilons, const SpaceSpec& s,
                      const TableOptions& options = {});

struct SlopeFit {
  double epsilon = 0.0;
  bool valid = false;
  double slope = 0.0;
  double residual = 0.0;  // RMS of the least-squares residuals
  int n_lo = 0;
  int n_hi = 0;
  std::size_t points = 0;
  std::string note;
};

struct EntropyEstimate {
  std::vector<SlopeFit> slopes;  // one per epsilon, descending
  double h_estimate = 0.0;       // slope at the smallest epsilon with a valid fit
  double h_epsilon = 0.0;
  int window_lo = 0;
  int window_hi = 0;
  bool monotonicity_repaired = false;
};

// Per-epsilon slope of log s_n against n over the window, stopping at the
// first saturated (s_n >= 95% of the sample) or resolution-limited cell.
// Needs >= 3 points per fit.
EntropyEstimate entropy_estimate(const EntropyTable& table,
                                 std::optional<std::pair<int, int>> window = std::nullopt);

// sum of multiplicity * log|l| over |l| > 1. Requires a complete list or a
// certified tail inside the closed unit disc.
double spectral_entropy(const SpectralData& sd);

// n log r for n distinct eigenvalues on the circle of radius r > 1.
double eigenplane_lower_bound(const std::vector<Complex>& eigenvalues);

}  // namespace entrolab
