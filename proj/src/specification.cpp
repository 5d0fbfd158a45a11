#include "entrolab/specification.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "entrolab/errors.hpp"

namespace entrolab {

int sp_constant(double eps) {
  if (!(eps > 0.0)) throw ValidationError("sp_constant needs eps > 0");
  if (eps > 1.0) throw ValidationError("sp_constant needs eps <= 1");
  int n = 0;
  while (!(std::ldexp(1.0, -n) < eps)) ++n;
  return n;
}

void SegmentSchedule::validate() const {
  if (segments.empty()) throw ValidationError("schedule needs at least one segment");
  if (gap < 1) throw ValidationError("schedule gap must be >= 1");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    if (s.a < 0 || s.a > s.b) throw ValidationError("segment needs 0 <= a <= b");
    if (i > 0) {
      const Segment& prev = segments[i - 1];
      if (s.a <= prev.b) throw ValidationError("segments must be ordered: b_i < a_{i+1}");
      if (s.a - prev.b < gap) {
        throw ValidationError("segments " + std::to_string(i) + " and " + std::to_string(i + 1) +
                              " are closer than the gap N = " + std::to_string(gap));
      }
    }
  }
}

int SegmentSchedule::period() const { return segments.back().b + gap; }

Admissibility check_admissible(const SequenceRule& weights, double p, std::size_t window) {
  Admissibility out;
  if (weights.has_zero()) {
    out.note = "zero weight";
    return out;
  }
  std::size_t len = window;
  if (auto l = weights.length()) len = std::min(len, *l);
  if (len < 4) {
    out.note = "weight list too short for a tail-ratio test";
    return out;
  }
  const double q = std::isinf(p) ? 1.0 : p;
  // log t_n, t_n = prod_{i<=n} |w_i|^{-1}
  double log_t = 0.0;
  double sum = 0.0;
  for (std::size_t n = 1; n <= len; ++n) {
    log_t -= std::log(std::abs(weights.at(n)));
    sum += std::exp(q * log_t);
  }
  out.partial_sum = sum;
  double ratio = 0.0;
  for (std::size_t n = len / 2; n < len; ++n) {
    ratio = std::max(ratio, 1.0 / std::abs(weights.at(n + 1)));
  }
  out.ratio_bound = ratio;
  if (ratio < 1.0) {
    const double rq = std::pow(ratio, q);
    out.admissible = true;
    out.tail_bound = std::exp(q * log_t) * rq / (1.0 - rq);
    out.note = "tail ratio " + std::to_string(ratio) + " < 1";
  } else {
    out.note = "tail ratio " + std::to_string(ratio) + " >= 1: partial sums do not certify convergence";
  }
  return out;
}

namespace {

const SequenceRule& backward_weights(const Operator& op) {
  const auto* b = std::get_if<BackwardShift>(&op.node());
  if (!b) throw ValidationError("expected a weighted backward shift");
  return b->weights;
}

// One forward-shift step that drops whatever leaves the truncation.
std::vector<Complex> forward_truncated(const SequenceRule& w, const std::vector<Complex>& x) {
  std::vector<Complex> out(x.size());
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    if (x[j] != Complex{}) out[j + 1] = x[j] / w.at(j + 2);
  }
  return out;
}

}  // namespace

ShadowReport shadow_point(const Operator& shift, const SegmentSchedule& schedule,
                          const SpaceSpec& metric, const ShadowOptions& options) {
  const SequenceRule& w = backward_weights(shift);
  if (metric.kind() != SpaceSpec::Kind::faggregate) {
    throw ValidationError("shadowing is certified in the aggregated F-norm only");
  }
  if (!(options.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  schedule.validate();

  const int period = schedule.period();
  const auto p = static_cast<std::size_t>(period);
  std::size_t ydim = 0;
  for (const auto& s : schedule.segments) ydim = std::max(ydim, s.y.dim());
  const std::size_t dim = options.dim ? options.dim : std::max(2 * p, ydim) + p;
  if (dim < 2 * p) throw ValidationError("insufficient headroom: truncation below 2 * period");
  if (ydim > dim) throw ValidationError("insufficient headroom: segment point longer than truncation");

  ShadowReport rep;
  rep.period = period;
  rep.dim = dim;
  rep.epsilon = options.epsilon;
  rep.admissible = check_admissible(w, metric.p()).admissible;

  // z_{n+1} = y^i_{n+1} for a_i <= n < b_i + N
  std::vector<Complex> z(dim);
  for (const auto& s : schedule.segments) {
    for (int n = s.a; n < s.b + schedule.gap; ++n) z[static_cast<std::size_t>(n)] = s.y.coord(static_cast<std::size_t>(n) + 1);
  }

  // xi = sum_k F^{k P} z over the truncation.
  std::vector<Complex> xi = z;
  std::vector<Complex> image = z;
  const std::size_t copies = (dim + p - 1) / p;
  for (std::size_t k = 1; k <= copies; ++k) {
    for (std::size_t step = 0; step < p; ++step) image = forward_truncated(w, image);
    for (std::size_t j = 0; j < dim; ++j) xi[j] += image[j];
  }
  const std::string space_id = schedule.segments.front().y.space_id();
  rep.xi = Vector(xi, space_id);

  // B^P xi == xi on coordinates 1..dim-P.
  Vector shifted = rep.xi;
  for (int step = 0; step < period; ++step) shifted = apply(shift, shifted);
  rep.exactly_periodic = true;
  double scale = 0.0;
  for (std::size_t j = 0; j + p < dim; ++j) {
    const double diff = std::abs(shifted.coords()[j] - xi[j]);
    rep.periodicity_error = std::max(rep.periodicity_error, diff);
    if (shifted.coords()[j] != xi[j]) rep.exactly_periodic = false;
    scale = std::max(scale, std::abs(xi[j]));
  }
  const bool periodic = rep.periodicity_error <= 1e-12 * std::max(1.0, scale);

  bool within = true;
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const Segment& s = schedule.segments[i];
    SegmentDeviation dev;
    dev.segment = i;
    Vector u = rep.xi;
    Vector v = s.y.resized(dim);
    for (int n = 0; n <= s.b; ++n) {
      if (n > 0) {
        u = apply(shift, u);
        v = apply(shift, v);
      }
      if (n < s.a) continue;
      // Coordinates past dim - n of B^n xi are not represented; the
      // aggregated norm charges at most 2^{-(dim-n)} for them.
      const std::size_t window = dim - static_cast<std::size_t>(n);
      const double d = detail::faggregate_norm_diff(u.coords().first(window), v.coords().first(window),
                                                    metric.p());
      const double tail = std::ldexp(1.0, -static_cast<int>(window));
      if (d + tail >= options.epsilon) within = false;
      if (n == s.a || d > dev.max_deviation) {
        dev.max_deviation = d;
        dev.worst_time = n;
      }
      dev.tail_bound = std::max(dev.tail_bound, tail);
    }
    rep.deviations.push_back(dev);
  }
  rep.certified = rep.admissible && periodic && within;
  return rep;
}

CompactSample SeparatedFamily::with_anchors() const {
  std::vector<Vector> pts = family.points;
  const std::size_t dim = pts.empty() ? 0 : pts.front().dim();
  for (const auto& a : anchors) {
    Vector r = a.resized(std::max(dim, a.dim()));
    if (std::find(pts.begin(), pts.end(), r) == pts.end()) pts.push_back(r);
  }
  return CompactSample::make(std::move(pts), 0.0, family.label + "+anchors");
}

SeparatedFamily sp_separated_family(const Operator& shift, const std::vector<Vector>& anchors,
                                    int n, double eps, int k, const SpaceSpec& metric) {
  backward_weights(shift);
  if (anchors.empty()) throw ValidationError("need at least one anchor");
  if (n < 1 || k < 1) throw ValidationError("need n >= 1 and k >= 1");
  const std::size_t m = anchors.size();
  double total = 1.0;
  for (int i = 0; i < n; ++i) total *= static_cast<double>(m);
  if (total > 1e5) throw ValidationError("family size m^n exceeds 10^5");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (distance(anchors[i], anchors[j], metric) < 3 * eps) {
        throw ValidationError("anchors " + std::to_string(i) + " and " + std::to_string(j) +
                              " are closer than 3 eps");
      }
    }
  }

  SeparatedFamily fam;
  fam.anchors = anchors;
  fam.k = k;
  fam.gap = sp_constant(eps);
  fam.steps = (n - 1) * (fam.gap + 1) + 1;
  const int stride = k * (fam.gap + 1);  // T-time between consecutive slots

  SegmentSchedule sched;
  sched.gap = fam.gap;
  for (int i = 0; i < n; ++i) sched.segments.push_back({i * stride, i * stride, anchors.front()});
  const auto period = static_cast<std::size_t>(sched.period());
  std::size_t adim = 0;
  for (const auto& a : anchors) adim = std::max(adim, a.dim());
  ShadowOptions opts;
  opts.epsilon = eps;
  opts.dim = std::max(2 * period, adim) + period;

  const auto count = static_cast<std::size_t>(total);
  std::vector<Vector> points;
  points.reserve(count);
  // snapshots[p * n + i] = T^{i * stride} x_p
  std::vector<Vector> snapshots;
  snapshots.reserve(count * static_cast<std::size_t>(n));
  bool all_certified = true;
  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  for (std::size_t t = 0; t < count; ++t) {
    for (int i = 0; i < n; ++i) sched.segments[static_cast<std::size_t>(i)].y = anchors[digits[static_cast<std::size_t>(i)]];
    ShadowReport rep = shadow_point(shift, sched, metric, opts);
    all_certified = all_certified && rep.certified;
    Vector cur = rep.xi;
    for (int i = 0; i < n; ++i) {
      if (i > 0) {
        for (int s = 0; s < stride; ++s) cur = apply(shift, cur);
      }
      snapshots.push_back(cur);
    }
    points.push_back(rep.xi);
    fam.tuples.push_back(digits);
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (++digits[i] < m) break;
      digits[i] = 0;
    }
  }

  // Tuples first differing in slot i are expected to separate at slot time i.
  const Operator tk = k == 1 ? shift : Operator::power(shift, k);
  const auto nn = static_cast<std::size_t>(n);
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t q = p + 1; q < count; ++q) {
      std::size_t slot = 0;
      while (fam.tuples[p][slot] == fam.tuples[q][slot]) ++slot;
      if (distance_exceeds(snapshots[p * nn + slot], snapshots[q * nn + slot], metric, eps)) continue;
      ++fam.fallback_pairs;
      if (dyn_distance(tk, points[p], points[q], fam.steps, metric) > eps) continue;
      std::ostringstream os;
      os << "separation failure between tuples (";
      for (auto d : fam.tuples[p]) os << d << ' ';
      os << ") and (";
      for (auto d : fam.tuples[q]) os << d << ' ';
      os << ")";
      throw ValidationError(os.str());
    }
  }
  fam.certified = all_certified;
  fam.family = CompactSample::make(std::move(points), 0.0,
                                   "sp-family(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")");
  return fam;
}

double sp_entropy_lower_bound(int m, int gap, int k) {
  if (m < 2 || gap < 1 || k < 1) throw ValidationError("need m >= 2, N >= 1, k >= 1");
  return std::log(static_cast<double>(m)) / (static_cast<double>(k) * (gap + 1));
}

std::vector<Vector> linear_periodic_points(const Operator& op, int k) {
  if (k < 1) throw ValidationError("period must be >= 1");
  const Matrix a = to_dense(op);
  Matrix ak = a;
  for (int i = 1; i < k; ++i) ak = ak * a;
  const Eigen::Index d = a.rows();
  Eigen::JacobiSVD<Matrix> norm_svd(ak);
  const double threshold = 1e-10 * norm_svd.singularValues()(0);
  Eigen::JacobiSVD<Matrix> svd(ak - Matrix::Identity(d, d), Eigen::ComputeFullV);
  std::vector<Vector> basis;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (svd.singularValues()(j) <= threshold) {
      const ColumnVector v = svd.matrixV().col(j);
      basis.emplace_back(std::vector<Complex>(v.data(), v.data() + v.size()));
    }
  }
  return basis;
}

}  // namespace entrolab
