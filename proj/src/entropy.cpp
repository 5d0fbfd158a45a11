#include "entrolab/entropy.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "entrolab/errors.hpp"

namespace entrolab {

CompactSample CompactSample::make(std::vector<Vector> points, double resolution, std::string label) {
  if (points.empty()) throw ValidationError("compact sample must be nonempty");
  for (const auto& p : points) {
    if (p.space_id() != points.front().space_id()) {
      throw ValidationError("compact sample mixes spaces");
    }
  }
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return lex_less(points[a], points[b]); });
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (!lex_less(points[idx[i - 1]], points[idx[i]])) {
      throw ValidationError("compact sample has duplicate points");
    }
  }
  CompactSample k;
  k.points = std::move(points);
  k.resolution = resolution;
  k.label = std::move(label);
  return k;
}

CompactSample unit_cube_grid(std::size_t dim, std::size_t per_axis, std::string label) {
  if (dim == 0 || per_axis < 2) throw ValidationError("grid needs dim >= 1 and >= 2 points per axis");
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (total > 50'000'000 / per_axis) throw ValidationError("grid too large");
    total *= per_axis;
  }
  const double step = 1.0 / static_cast<double>(per_axis - 1);
  std::vector<Vector> pts;
  pts.reserve(total);
  std::vector<std::size_t> digits(dim, 0);
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<double> c(dim);
    for (std::size_t j = 0; j < dim; ++j) c[j] = static_cast<double>(digits[j]) * step;
    pts.push_back(Vector::real(c));
    for (std::size_t j = dim; j-- > 0;) {
      if (++digits[j] < per_axis) break;
      digits[j] = 0;
    }
  }
  CompactSample k;
  k.points = std::move(pts);
  k.resolution = std::sqrt(static_cast<double>(dim)) * step / 2;
  k.label = label.empty() ? "grid" + std::to_string(per_axis) + "^" + std::to_string(dim) : label;
  return k;
}

double dyn_distance(const Operator& op, const Vector& x, const Vector& y, int n, const SpaceSpec& s) {
  if (n < 1) throw ValidationError("dyn_distance needs n >= 1");
  Vector a = x;
  Vector b = y;
  double m = distance(a, b, s);
  for (int i = 1; i < n; ++i) {
    a = apply(op, a);
    b = apply(op, b);
    m = std::max(m, distance(a, b, s));
  }
  return m;
}

namespace {

// Orbits T^t x, t < steps, of every sample point in lexicographic order,
// stored as flat coordinate arrays padded to a common dimension.
class OrbitCache {
 public:
  OrbitCache(const Operator& op, const CompactSample& k, int steps) : steps_(steps) {
    order_.resize(k.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(),
              [&](std::size_t a, std::size_t b) { return lex_less(k.points[a], k.points[b]); });
    for (const auto& p : k.points) dim_ = std::max(dim_, p.dim());
    count_ = k.size();
    data_.assign(static_cast<std::size_t>(steps), std::vector<Complex>(count_ * dim_));
    for (std::size_t i = 0; i < count_; ++i) {
      Vector cur = k.points[order_[i]].resized(dim_);
      for (int t = 0; t < steps; ++t) {
        if (t > 0) cur = apply(op, cur);
        std::copy(cur.coords().begin(), cur.coords().end(),
                  data_[static_cast<std::size_t>(t)].begin() + static_cast<std::ptrdiff_t>(i * dim_));
      }
    }
  }

  std::span<const Complex> at(int t, std::size_t i) const {
    return {data_[static_cast<std::size_t>(t)].data() + i * dim_, dim_};
  }
  std::size_t count() const { return count_; }
  std::size_t dim() const { return dim_; }
  int steps() const { return steps_; }
  std::size_t original_index(std::size_t i) const { return order_[i]; }

 private:
  int steps_ = 0;
  std::size_t dim_ = 0;
  std::size_t count_ = 0;
  std::vector<std::size_t> order_;
  std::vector<std::vector<Complex>> data_;
};

// (n, eps)-separation between cached points. Tries the last time that
// separated a pair first, then the ends of the window.
class SeparationTest {
 public:
  SeparationTest(const OrbitCache& cache, const SpaceSpec& s, int n, double eps)
      : cache_(cache), space_(s), n_(n), eps_(eps) {
    order_.push_back(n - 1);
    if (n > 1) order_.push_back(0);
    for (int t = n - 2; t >= 1; --t) order_.push_back(t);
  }

  bool separated(std::size_t p, std::size_t q) {
    if (hint_ < n_ && exceeds(hint_, p, q)) return true;
    for (int t : order_) {
      if (t == hint_) continue;
      if (exceeds(t, p, q)) {
        hint_ = t;
        return true;
      }
    }
    return false;
  }

 private:
  bool exceeds(int t, std::size_t p, std::size_t q) const {
    return detail::diff_exceeds(cache_.at(t, p), cache_.at(t, q), space_, eps_);
  }

  const OrbitCache& cache_;
  const SpaceSpec& space_;
  int n_;
  double eps_;
  int hint_ = std::numeric_limits<int>::max();
  std::vector<int> order_;
};

// Grid buckets over up to three real coordinates at one time step. In an lp
// metric every coordinate difference is bounded by the distance, so a point
// within eps sits in a neighbouring cell at every time step.
class Buckets {
 public:
  using Key = std::array<std::int64_t, 3>;

  Buckets(const OrbitCache& cache, int n, double eps) : cache_(cache), eps_(eps) {
    const std::size_t reals = 2 * cache.dim();
    double best_score = 0.0;
    for (int t = 0; t < n; ++t) {
      std::vector<std::pair<double, std::size_t>> spreads;
      for (std::size_t j = 0; j < reals; ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < cache.count(); ++i) {
          const double v = component(t, i, j);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        const double cells = (hi - lo) / eps;
        if (cells >= 3.0 && cells < 1e15 && std::abs(lo / eps) < 1e15 && std::abs(hi / eps) < 1e15) {
          spreads.emplace_back(cells, j);
        }
      }
      std::sort(spreads.begin(), spreads.end(), std::greater<>());
      if (spreads.size() > 3) spreads.resize(3);
      double score = 0.0;
      for (const auto& sp : spreads) score += std::log(sp.first);
      if (score > best_score) {
        best_score = score;
        time_ = t;
        comps_.clear();
        for (const auto& sp : spreads) comps_.push_back(sp.second);
      }
    }
  }

  bool enabled() const { return !comps_.empty(); }

  void insert(std::size_t i) { cells_[key(i)].push_back(i); }

  // Calls f(j) for every stored point in the 3^h neighbourhood of i's cell
  // until f returns true.
  template <class F>
  bool any_neighbour(std::size_t i, F&& f) const {
    const Key center = key(i);
    const std::size_t h = comps_.size();
    std::size_t combos = 1;
    for (std::size_t c = 0; c < h; ++c) combos *= 3;
    for (std::size_t m = 0; m < combos; ++m) {
      Key k = center;
      std::size_t r = m;
      for (std::size_t c = 0; c < h; ++c) {
        k[c] += static_cast<std::int64_t>(r % 3) - 1;
        r /= 3;
      }
      auto it = cells_.find(k);
      if (it == cells_.end()) continue;
      for (std::size_t j : it->second) {
        if (f(j)) return true;
      }
    }
    return false;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = 1469598103934665603ULL;
      for (auto v : k) {
        h ^= static_cast<std::uint64_t>(v);
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };

  double component(int t, std::size_t i, std::size_t j) const {
    const Complex c = cache_.at(t, i)[j / 2];
    return j % 2 == 0 ? c.real() : c.imag();
  }

  Key key(std::size_t i) const {
    Key k{0, 0, 0};
    for (std::size_t c = 0; c < comps_.size(); ++c) {
      k[c] = static_cast<std::int64_t>(std::floor(component(time_, i, comps_[c]) / eps_));
    }
    return k;
  }

  const OrbitCache& cache_;
  double eps_;
  int time_ = 0;
  std::vector<std::size_t> comps_;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> cells_;
};

// Indices into the cache's lexicographic order.
std::vector<std::size_t> greedy_indices(const OrbitCache& cache, const SpaceSpec& s, int n,
                                        double eps) {
  SeparationTest test(cache, s, n, eps);
  std::vector<std::size_t> kept;
  std::optional<Buckets> buckets;
  if (s.kind() == SpaceSpec::Kind::lp) {
    buckets.emplace(cache, n, eps);
    if (!buckets->enabled()) buckets.reset();
  }
  for (std::size_t p = 0; p < cache.count(); ++p) {
    bool conflict = false;
    if (buckets) {
      conflict = buckets->any_neighbour(p, [&](std::size_t q) { return !test.separated(p, q); });
    } else {
      for (auto it = kept.rbegin(); it != kept.rend() && !conflict; ++it) {
        conflict = !test.separated(p, *it);
      }
    }
    if (!conflict) {
      kept.push_back(p);
      if (buckets) buckets->insert(p);
    }
  }
  return kept;
}

std::vector<std::size_t> exact_indices(const OrbitCache& cache, const SpaceSpec& s, int n,
                                       double eps) {
  const std::size_t m = cache.count();
  if (m > kExactSampleCap) throw ValidationError("exact separated-set search is capped at 24 points");
  SeparationTest test(cache, s, n, eps);
  std::vector<std::uint32_t> adj(m, 0);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = p + 1; q < m; ++q) {
      if (!test.separated(p, q)) {
        adj[p] |= 1u << q;
        adj[q] |= 1u << p;
      }
    }
  }
  std::uint32_t best_mask = 0;
  int best_size = 0;
  std::function<void(std::uint32_t, std::uint32_t, int)> search = [&](std::uint32_t cand,
                                                                      std::uint32_t chosen,
                                                                      int size) {
    if (cand == 0) {
      if (size > best_size) {
        best_size = size;
        best_mask = chosen;
      }
      return;
    }
    if (size + std::popcount(cand) <= best_size) return;
    const int v = std::countr_zero(cand);
    const std::uint32_t bit = 1u << v;
    search(cand & ~adj[static_cast<std::size_t>(v)] & ~bit, chosen | bit, size + 1);
    search(cand & ~bit, chosen, size);
  };
  const std::uint32_t all = m == 32 ? ~0u : ((1u << m) - 1u);
  search(all, 0, 0);
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < m; ++p) {
    if (best_mask & (1u << p)) out.push_back(p);
  }
  return out;
}

std::vector<Vector> to_points(const OrbitCache& cache, const CompactSample& k,
                              const std::vector<std::size_t>& idx) {
  std::vector<Vector> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(k.points[cache.original_index(i)]);
  return out;
}

void require_positive(double eps) {
  if (!(eps > 0.0)) throw ValidationError("epsilon must be positive");
}

}  // namespace

std::vector<Vector> greedy_separated(const Operator& op, const CompactSample& k, int n, double eps,
                                     const SpaceSpec& s) {
  require_positive(eps);
  if (n < 1) throw ValidationError("n must be >= 1");
  OrbitCache cache(op, k, n);
  return to_points(cache, k, greedy_indices(cache, s, n, eps));
}

std::vector<Vector> max_separated_exact(const Operator& op, const CompactSample& k, int n,
                                        double eps, const SpaceSpec& s) {
  require_positive(eps);
  if (n < 1) throw ValidationError("n must be >= 1");
  if (k.size() > kExactSampleCap) throw ValidationError("exact separated-set search is capped at 24 points");
  OrbitCache cache(op, k, n);
  return to_points(cache, k, exact_indices(cache, s, n, eps));
}

const TableEntry& EntropyTable::at(int n, double eps) const {
  for (const auto& e : entries) {
    if (e.n == n && e.epsilon == eps) return e;
  }
  throw ValidationError("no table entry for this (n, epsilon)");
}

EntropyTable sn_table(const Operator& op, const CompactSample& k, std::vector<int> n_values,
                      std::vector<double> epsilons, const SpaceSpec& s,
                      const TableOptions& options) {
  if (n_values.empty() || epsilons.empty()) throw ValidationError("n range and epsilon list must be nonempty");
  for (int n : n_values) {
    if (n < 1) throw ValidationError("n must be >= 1");
  }
  for (double e : epsilons) require_positive(e);
  if (options.method == CountMethod::exact && k.size() > kExactSampleCap) {
    throw ValidationError("exact method needs a sample of at most 24 points");
  }
  std::sort(n_values.begin(), n_values.end());
  n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  epsilons.erase(std::unique(epsilons.begin(), epsilons.end()), epsilons.end());

  OrbitCache cache(op, k, n_values.back());

  EntropyTable table;
  table.n_values = n_values;
  table.epsilons = epsilons;
  table.sample_size = k.size();
  table.operator_id = op.describe();
  table.sample_id = k.label;
  table.method = options.method;
  const std::size_t rows = epsilons.size();
  const std::size_t cols = n_values.size();
  table.entries.resize(rows * cols);

  auto fill = [&](std::size_t cell) {
    const std::size_t r = cell / cols;
    const std::size_t c = cell % cols;
    TableEntry& e = table.entries[cell];
    e.n = n_values[c];
    e.epsilon = epsilons[r];
    e.raw_count = options.method == CountMethod::exact
                      ? exact_indices(cache, s, e.n, e.epsilon).size()
                      : greedy_indices(cache, s, e.n, e.epsilon).size();
  };
  const std::size_t cells = rows * cols;
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(cells)));
  if (threads == 1) {
    for (std::size_t cell = 0; cell < cells; ++cell) fill(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t cell = next++; cell < cells; cell = next++) fill(cell);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Nondecreasing in n, then nonincreasing in epsilon, by running maxima.
  for (auto& e : table.entries) e.count = e.raw_count;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 1; c < cols; ++c) {
      auto& cur = table.entries[r * cols + c];
      cur.count = std::max(cur.count, table.entries[r * cols + c - 1].count);
    }
  }
  for (std::size_t r = 1; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      auto& cur = table.entries[r * cols + c];
      cur.count = std::max(cur.count, table.entries[(r - 1) * cols + c].count);
    }
  }
  // A rho-net of K is a rho * max_{i<n} ||T^i|| net in the Bowen metric d_n,
  // which brackets the sample count between the counts of K at eps and at
  // eps + 2 * that radius.
  double lp_radius = k.resolution;
  if (s.kind() == SpaceSpec::Kind::lp && k.resolution > 0.0) {
    // ||v||_p <= d^{max(0, 1/p - 1/2)} ||v||_2
    const double dim = static_cast<double>(cache.dim());
    lp_radius *= std::pow(dim, std::max(0.0, 1.0 / s.p() - 0.5));
    try {
      double dil = 1.0;
      for (int n = 1; n <= n_values.back(); ++n) {
        if (n > 1) dil = std::max(dil, power_norm(op, n - 1, s));
        table.dilation.push_back(dil);
      }
    } catch (const ValidationError&) {
      table.dilation.clear();
    }
  }
  for (auto& e : table.entries) {
    if (e.count != e.raw_count) table.repaired = true;
    e.saturated = static_cast<double>(e.count) >= kSaturationFraction * static_cast<double>(k.size());
    if (!table.dilation.empty()) {
      const double radius = lp_radius * table.dilation[static_cast<std::size_t>(e.n - 1)];
      e.resolution_limited = 2.0 * radius > kResolutionFraction * e.epsilon;
    }
  }
  return table;
}

EntropyEstimate entropy_estimate(const EntropyTable& table, std::optional<std::pair<int, int>> window) {
  if (table.entries.empty()) throw ValidationError("empty entropy table");
  EntropyEstimate est;
  est.window_lo = window ? window->first : table.n_values.front();
  est.window_hi = window ? window->second : table.n_values.back();
  if (est.window_lo > est.window_hi || est.window_lo < table.n_values.front() ||
      est.window_hi > table.n_values.back()) {
    throw ValidationError("fit window outside the table's n range");
  }
  est.monotonicity_repaired = table.repaired;

  bool any_valid = false;
  for (double eps : table.epsilons) {
    SlopeFit fit;
    fit.epsilon = eps;
    std::vector<double> xs;
    std::vector<double> ys;
    for (int n : table.n_values) {
      if (n < est.window_lo || n > est.window_hi) continue;
      const TableEntry& e = table.at(n, eps);
      if (e.saturated || e.resolution_limited) break;
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(static_cast<double>(e.count)));
    }
    fit.points = xs.size();
    if (xs.size() < 3) {
      fit.note = xs.empty() ? "saturated or resolution-limited: refine sample"
                            : "fewer than 3 usable points";
      est.slopes.push_back(fit);
      continue;
    }
    fit.n_lo = static_cast<int>(xs.front());
    fit.n_hi = static_cast<int>(xs.back());
    const double k = static_cast<double>(xs.size());
    const double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
    // Centre y on its first value so a constant sequence gives slope 0 exactly.
    double sxy = 0.0;
    double sxx = 0.0;
    double ybar = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - xbar) * (ys[i] - ys[0]);
      sxx += (xs[i] - xbar) * (xs[i] - xbar);
      ybar += ys[i] - ys[0];
    }
    ybar /= k;
    fit.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = (ys[i] - ys[0]) - (ybar + fit.slope * (xs[i] - xbar));
      ss += r * r;
    }
    fit.residual = std::sqrt(ss / k);
    fit.valid = true;
    any_valid = true;
    est.h_estimate = fit.slope;
    est.h_epsilon = eps;
    est.slopes.push_back(fit);
  }
  if (!any_valid) throw ValidationError("no epsilon row has 3 usable points (saturated or resolution-limited): refine sample");
  return est;
}

double spectral_entropy(const SpectralData& sd) {
  if (sd.region && sd.region->radius > 1.0) {
    throw ValidationError("spectrum contains a disc of radius > 1: entropy is not a finite sum");
  }
  if (!sd.complete && sd.tail_sup > 1.0) {
    throw ValidationError("unlisted spectrum is not certified to lie in the closed unit disc");
  }
  double h = 0.0;
  for (const auto& e : sd.eigenvalues) {
    if (e.log_modulus > 0.0) h += e.multiplicity * e.log_modulus;
  }
  return h;
}

double eigenplane_lower_bound(const std::vector<Complex>& eigenvalues) {
  if (eigenvalues.empty()) throw ValidationError("need at least one eigenvalue");
  const double r = std::abs(eigenvalues.front());
  for (const auto& l : eigenvalues) {
    if (std::abs(std::abs(l) - r) > 1e-12 * r) {
      throw ValidationError("eigenvalues do not share one modulus; use spectral_entropy");
    }
  }
  if (!(r > 1.0)) throw ValidationError("eigenvalue modulus must exceed 1");
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
      if (std::abs(eigenvalues[i] - eigenvalues[j]) <= 1e-12 * r) {
        throw ValidationError("eigenvalues must be distinct");
      }
    }
  }
  return static_cast<double>(eigenvalues.size()) * std::log(r);
}

}  // namespace entrolab
