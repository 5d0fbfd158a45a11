#include "entrolab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entrolab/entropy.hpp"
#include "entrolab/errors.hpp"
#include "entrolab/specification.hpp"

namespace entrolab {

namespace {

ColumnVector column(const Vector& v) {
  ColumnVector c(static_cast<Eigen::Index>(v.dim()));
  for (std::size_t i = 0; i < v.dim(); ++i) c(static_cast<Eigen::Index>(i)) = v.coords()[i];
  return c;
}

Vector from_column(const ColumnVector& c, const std::string& space_id) {
  return Vector(std::vector<Complex>(c.data(), c.data() + c.size()), space_id);
}

Matrix dense_checked(const Operator& a, const Vector& x) {
  Matrix m = to_dense(a);
  if (static_cast<std::size_t>(m.rows()) != x.dim()) {
    throw ValidationError("point dimension " + std::to_string(x.dim()) + " does not match operator dimension " +
                          std::to_string(m.rows()));
  }
  return m;
}

}  // namespace

void OrbitMeasure::validate() const {
  if (atoms.empty()) throw ValidationError("measure has no atoms");
  if (period < 1) throw ValidationError("period must be >= 1");
  double total = 0.0;
  for (const auto& at : atoms) {
    if (!(at.mass > 0.0)) throw ValidationError("atom masses must be positive");
    total += at.mass;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("atom masses must sum to 1");
}

OrbitMeasure orbit_measure(const Operator& a, const Vector& x, int k) {
  if (k < 1) throw ValidationError("period must be >= 1");
  const Matrix m = dense_checked(a, x);
  const ColumnVector x0 = column(x);
  OrbitMeasure mu;
  mu.period = k;
  mu.operator_id = a.describe();
  ColumnVector cur = x0;
  for (int i = 0; i < k; ++i) {
    mu.atoms.push_back({from_column(cur, x.space_id()), 1.0 / k});
    cur = m * cur;
  }
  const double err = (cur - x0).norm();
  if (!(err < kPeriodicTol * (1.0 + x0.norm()))) {
    throw ValidationError("point is not " + std::to_string(k) + "-periodic: ||A^k x - x|| = " + std::to_string(err));
  }
  return mu;
}

InvarianceReport check_invariance(const Operator& a, const OrbitMeasure& mu, double tol) {
  mu.validate();
  const Matrix m = dense_checked(a, mu.atoms.front().point);
  InvarianceReport rep;
  rep.invariant = true;
  std::vector<bool> used(mu.atoms.size(), false);
  for (const auto& at : mu.atoms) {
    const ColumnVector image = m * column(at.point);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < mu.atoms.size(); ++j) {
      if (used[j] || std::abs(mu.atoms[j].mass - at.mass) > 1e-12) continue;
      const double d = (image - column(mu.atoms[j].point)).norm();
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (std::isinf(best)) {
      rep.invariant = false;
      rep.max_mismatch = best;
      return rep;
    }
    used[best_j] = true;
    rep.max_mismatch = std::max(rep.max_mismatch, best);
    if (!(best <= tol * (1.0 + image.norm()))) rep.invariant = false;
  }
  return rep;
}

MetricEntropy metric_entropy_periodic(const OrbitMeasure& mu) {
  mu.validate();
  return {0.0, "uniform measure on a periodic orbit of period " + std::to_string(mu.period) +
                   ": finite partition refinements stabilize, h_mu = 0"};
}

SupportReport support_in_center(const OrbitMeasure& mu, const Splitting& split, double tol) {
  mu.validate();
  SupportReport rep;
  rep.in_center = true;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    const ColumnVector x = column(mu.atoms[i].point);
    if (x.size() != split.change_of_basis.rows()) throw ValidationError("atom dimension does not match the splitting");
    const auto c = split.components(x);
    const double off = std::max(c.unstable.norm(), c.stable.norm());
    if (off > rep.max_offending) {
      rep.max_offending = off;
      rep.worst_atom = i;
    }
    if (!(off < tol * (1.0 + x.norm()))) rep.in_center = false;
  }
  return rep;
}

GapReport variational_gap(const Operator& a, int search_periods) {
  if (search_periods < 1) throw ValidationError("search_periods must be >= 1");
  const Matrix m = to_dense(a);
  if (static_cast<std::size_t>(m.rows()) > kGapMaxDim) throw ValidationError("variational_gap needs d <= 8");
  GapReport rep;
  rep.h_top = spectral_entropy(spectrum(a));
  const Splitting split = riesz_split(a);
  rep.center_dim = static_cast<std::size_t>(split.center.dim());
  rep.periods_searched = search_periods;
  rep.all_in_center = true;

  auto examine = [&](const Vector& x, int k) {
    const OrbitMeasure mu = orbit_measure(a, x, k);
    if (!check_invariance(a, mu).invariant) throw NonConvergence("periodic-orbit measure failed invariance");
    metric_entropy_periodic(mu);
    const SupportReport s = support_in_center(mu, split, kCenterTol);
    rep.max_offending = std::max(rep.max_offending, s.max_offending);
    rep.all_in_center = rep.all_in_center && s.in_center;
    ++rep.periodic_points;
  };

  examine(Vector::zeros(static_cast<std::size_t>(m.rows())), 1);
  for (int k = 1; k <= search_periods; ++k) {
    const std::vector<Vector> basis = linear_periodic_points(a, k);
    if (basis.empty()) continue;
    Vector sum = Vector::zeros(basis.front().dim());
    for (const auto& b : basis) {
      examine(b, k);
      sum = sum + b;
    }
    if (basis.size() > 1) examine(sum, k);
  }
  rep.best_h_mu = 0.0;
  rep.gap = rep.h_top - rep.best_h_mu;
  rep.scope =
      "best_h_mu is taken over periodic-orbit measures only (periods 1.." + std::to_string(search_periods) +
      "); every such measure has zero entropy. General invariant measures are not enumerated.";
  return rep;
}

}  // namespace entrolab
