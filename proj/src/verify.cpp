#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "entrolab/errors.hpp"
#include "entrolab/experiment.hpp"
#include "entrolab/measures.hpp"
#include "entrolab/spectrum.hpp"
#include "entrolab/symbolic.hpp"

namespace entrolab {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vector random_vector(Rng& rng, std::size_t dim, double scale) {
  std::vector<Complex> c(dim);
  for (auto& z : c) z = {uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
  return Vector(std::move(c));
}

std::vector<Complex> random_eigenvalues(Rng& rng, std::size_t count) {
  std::vector<Complex> v(count);
  for (auto& z : v) z = std::polar(uniform(rng, 0.1, 3.0), uniform(rng, 0.0, 6.283185307179586));
  return v;
}

CheckResult check(std::string name, bool ok, const std::string& detail = {}) {
  return {std::move(name), ok, detail};
}

CheckResult triangle_inequality(Rng& rng) {
  const SpaceSpec spaces[] = {SpaceSpec::lp(1.0), SpaceSpec::lp(2.0), SpaceSpec::lp(3.5),
                              SpaceSpec::lp(INFINITY), SpaceSpec::faggregate(SpaceSpec::lp(2.0))};
  for (int t = 0; t < 200; ++t) {
    const Vector x = random_vector(rng, 6, 2.0), y = random_vector(rng, 6, 2.0), z = random_vector(rng, 6, 2.0);
    for (const auto& s : spaces) {
      if (distance(x, z, s) > distance(x, y, s) + distance(y, z, s) + 1e-12) {
        return check("spaces.triangle_inequality", false, s.describe());
      }
    }
  }
  return check("spaces.triangle_inequality", true);
}

CheckResult shift_inverse(Rng& rng) {
  const Operator b = Operator::backward_shift(SequenceRule::geometric(1.5, 1.01));
  const Operator f = Operator::forward_shift(SequenceRule::geometric(1.5, 1.01));
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vector x = random_vector(rng, 12, 1.0).resized(13);
    worst = std::max(worst, distance(apply(b, apply(f, x)), x, SpaceSpec::lp(2.0)));
  }
  std::ostringstream os;
  os << "max |BFx - x| = " << worst;
  return check("operators.backward_forward_identity", worst < 1e-12, os.str());
}

Matrix random_matrix(Rng& rng, Eigen::Index d) {
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
  }
  return m;
}

CheckResult power_norm_route(Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 30; ++t) {
    const Matrix m = random_matrix(rng, 4);
    const double a = power_norm(Operator::dense(m), 3, SpaceSpec::lp(2.0));
    Eigen::JacobiSVD<Matrix> svd(m * m * m);
    worst = std::max(worst, std::abs(a - svd.singularValues()(0)) / svd.singularValues()(0));
  }
  std::ostringstream os;
  os << "max relative gap to SVD = " << worst;
  return check("operators.power_iteration_vs_svd", worst < 1e-8, os.str());
}

CheckResult spectral_power_rule(Rng& rng) {
  for (int t = 0; t < 100; ++t) {
    const Operator op = Operator::diagonal(random_eigenvalues(rng, 5));
    const int m = 2 + t % 4;
    const double lhs = spectral_entropy(spectrum(Operator::power(op, m)));
    const double rhs = m * spectral_entropy(spectrum(op));
    if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, rhs)) return check("entropy.power_rule", false);
  }
  return check("entropy.power_rule", true);
}

CheckResult spectral_direct_sum(Rng& rng) {
  for (int t = 0; t < 100; ++t) {
    const Operator a = Operator::diagonal(random_eigenvalues(rng, 3));
    const Operator b = Operator::diagonal(random_eigenvalues(rng, 4));
    const double lhs = spectral_entropy(spectrum(Operator::direct_sum({a, b})));
    const double rhs = spectral_entropy(spectrum(a)) + spectral_entropy(spectrum(b));
    if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, rhs)) return check("entropy.direct_sum", false);
  }
  return check("entropy.direct_sum", true);
}

CheckResult greedy_vs_exact(Rng& rng) {
  const Operator op = Operator::diagonal(std::vector<Complex>{1.7, 0.8});
  int equal = 0;
  for (int t = 0; t < 60; ++t) {
    std::vector<Vector> pts;
    const int size = 6 + t % 12;
    for (int i = 0; i < size; ++i) pts.push_back(Vector::real({uniform(rng, 0, 1), uniform(rng, 0, 1)}));
    const CompactSample k = CompactSample::make(pts, 0.0);
    const double eps = uniform(rng, 0.1, 0.5);
    const auto g = greedy_separated(op, k, 2, eps, SpaceSpec::lp(2.0)).size();
    const auto e = max_separated_exact(op, k, 2, eps, SpaceSpec::lp(2.0)).size();
    if (e < g) return check("entropy.exact_ge_greedy", false);
    equal += e == g;
  }
  return check("entropy.exact_ge_greedy", true, std::to_string(equal) + "/60 equal");
}

CheckResult sample_monotonicity(Rng& rng) {
  const Operator op = Operator::diagonal(std::vector<Complex>{2.0});
  const SpaceSpec s = SpaceSpec::lp(2.0);
  const TableOptions exact{CountMethod::exact};
  for (int t = 0; t < 30; ++t) {
    std::vector<Vector> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(Vector::real({std::ldexp(std::floor(uniform(rng, 0, 1024)), -10)}));
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::shuffle(pts.begin(), pts.end(), rng);
    const std::vector<Vector> sub(pts.begin(), pts.begin() + static_cast<long>(pts.size() / 2));
    const auto big = sn_table(op, CompactSample::make(pts, 0.0), {1, 2, 3, 4}, {0.1, 0.03}, s, exact);
    const auto small = sn_table(op, CompactSample::make(sub, 0.0), {1, 2, 3, 4}, {0.1, 0.03}, s, exact);
    for (std::size_t i = 0; i < big.entries.size(); ++i) {
      if (small.entries[i].count > big.entries[i].count) return check("entropy.subsample_monotone", false);
    }
  }
  return check("entropy.subsample_monotone", true);
}

CheckResult shadow_schedules(Rng& rng) {
  const Operator b = Operator::backward_shift(SequenceRule::constant(2.0));
  const SpaceSpec s = SpaceSpec::faggregate(SpaceSpec::lp(2.0));
  for (int t = 0; t < 50; ++t) {
    const double eps = t % 2 ? 0.1 : 0.01;
    SegmentSchedule sched;
    sched.gap = sp_constant(eps);
    int time = static_cast<int>(uniform(rng, 0, 4));
    const int segs = 1 + t % 3;
    for (int i = 0; i < segs; ++i) {
      const int len = static_cast<int>(uniform(rng, 0, 4));
      sched.segments.push_back({time, time + len, random_vector(rng, 20, 3.0)});
      time += len + sched.gap + static_cast<int>(uniform(rng, 0, 3));
    }
    ShadowOptions opt;
    opt.epsilon = eps;
    const ShadowReport rep = shadow_point(b, sched, s, opt);
    if (!rep.certified || !rep.exactly_periodic) return check("specification.shadow_certified", false);
  }
  return check("specification.shadow_certified", true);
}

CheckResult conjugacy(Rng& rng) {
  for (int n : {2, 3, 4}) {
    const auto rep = verify_conjugacy(SequenceRule::constant(2.0), n, 200, 64, 0.0, rng());
    if (!rep.passed) return check("symbolic.conjugacy_exact", false, "N = " + std::to_string(n));
  }
  return check("symbolic.conjugacy_exact", true);
}

CheckResult periodic_in_center(Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const double th = 2 * std::numbers::pi / (3 + t % 4);
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = uniform(rng, 1.5, 3.0);
    m(1, 1) = std::cos(th);
    m(1, 2) = -std::sin(th);
    m(2, 1) = std::sin(th);
    m(2, 2) = std::cos(th);
    m(3, 3) = uniform(rng, 0.1, 0.6);
    m(0, 3) = uniform(rng, -1, 1);
    const Matrix q = random_matrix(rng, 4) + 4.0 * Matrix::Identity(4, 4);
    const GapReport g = variational_gap(Operator::dense(q * m * q.inverse()), 12);
    worst = std::max(worst, g.max_offending);
    if (!g.all_in_center || !(g.gap > 0)) return check("measures.periodic_points_in_center", false);
  }
  std::ostringstream os;
  os << "max off-center component = " << worst;
  return check("measures.periodic_points_in_center", true, os.str());
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, unsigned threads) {
  (void)threads;
  Rng rng(seed);
  std::vector<CheckResult> out;
  auto guarded = [&](auto&& fn) {
    try {
      out.push_back(fn(rng));
    } catch (const std::exception& e) {
      out.push_back(check("exception", false, e.what()));
    }
  };
  guarded(triangle_inequality);
  guarded(shift_inverse);
  guarded(power_norm_route);
  guarded(spectral_power_rule);
  guarded(spectral_direct_sum);
  guarded(greedy_vs_exact);
  guarded(sample_monotonicity);
  guarded(shadow_schedules);
  guarded(conjugacy);
  guarded(periodic_in_center);
  return out;
}

}  // namespace entrolab
