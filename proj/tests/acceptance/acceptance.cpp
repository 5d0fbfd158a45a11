// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "entrolab/entropy.hpp"
#include "entrolab/measures.hpp"
#include "entrolab/specification.hpp"
#include "entrolab/spectrum.hpp"
#include "entrolab/symbolic.hpp"

using namespace entrolab;

namespace {

using Clock = std::chrono::steady_clock;
using Rng = std::mt19937_64;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int integer(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<Complex> random_eigenvalues(Rng& rng, int count, double lo, double hi) {
  std::vector<Complex> v(static_cast<std::size_t>(count));
  for (auto& z : v) z = std::polar(uniform(rng, lo, hi), uniform(rng, 0.0, 2 * std::numbers::pi));
  return v;
}

Matrix random_matrix(Rng& rng, int d) {
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
  }
  return m;
}

// Rounding bound for a floating sum of `terms` values with absolute sum `mass`.
double summation_bound(std::size_t terms, double mass) { return static_cast<double>(terms + 1) * DBL_EPSILON * mass; }

// Independent oracle for the spectral formula.
double log_plus_sum(const std::vector<Complex>& eigs, int power = 1) {
  double h = 0.0;
  for (auto z : eigs) h += std::max(0.0, power * std::log(std::abs(z)));
  return h;
}

// 1. Empirical slopes on cube grids against the eigenvalue formula.
Outcome criterion1() {
  Outcome o;
  const SpaceSpec l2 = SpaceSpec::lp(2.0);
  std::vector<int> ns;
  for (int n = 1; n <= 12; ++n) ns.push_back(n);
  const std::vector<double> eps = {0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
  Matrix rot(2, 2);
  rot << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
  struct Instance {
    const char* name;
    Operator op;
    std::size_t dim;
    std::size_t per_axis;
    double oracle;
  };
  const std::vector<Instance> cases = {
      {"diag(2)", Operator::diagonal({2.0}), 1, 262145, std::log(2.0)},
      {"diag(2,3)", Operator::diagonal({2.0, 3.0}), 2, 513, std::log(2.0) + std::log(3.0)},
      {"diag(2,0.5)", Operator::diagonal({2.0, 0.5}), 2, 1025, std::log(2.0)},
      {"1.5 R(1)", Operator::dense(1.5 * rot), 2, 513, 2 * std::log(1.5)},
  };
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const CompactSample k = unit_cube_grid(c.dim, c.per_axis, c.name);
    const EntropyTable t = sn_table(c.op, k, ns, eps, l2);
    const EntropyEstimate e = entropy_estimate(t);
    const double secs = seconds_since(t0);
    const double rel = std::abs(e.h_estimate - c.oracle) / c.oracle;
    o.detail << " " << c.name << ": |K|=" << k.size() << " h=" << e.h_estimate << " at eps=" << e.h_epsilon
             << " vs " << c.oracle << " (" << rel * 100 << "%, " << secs << "s);";
    o.require(k.size() >= 4096, std::string(c.name) + " sample size");
    o.require(rel <= 0.10, std::string(c.name) + " slope off by more than 10%");
    o.require(secs < 120.0, std::string(c.name) + " runtime");
  }
  return o;
}

// 2. Spectral formula on compact diagonals.
Outcome criterion2() {
  Outcome o;
  const double a = spectral_entropy(spectrum(Operator::diagonal(SequenceRule::geometric(1.5, 0.5))));
  const double b = spectral_entropy(spectrum(Operator::diagonal({2.0, 1.2, 0.9, 0.45, 0.225, 0.1125})));
  const double c = spectral_entropy(spectrum(Operator::diagonal({1.0, 0.9, Complex(0, 1), 0.5, 0.25})));
  const double want_a = std::log(1.5);
  const double want_b = std::log(2.0) + std::log(1.2);
  o.detail << " geometric 1.5: " << a << " (want " << want_a << "); {2,1.2,0.9,..}: " << b << " (want " << want_b
           << "); all <= 1: " << c;
  o.require(std::abs(a - want_a) <= summation_bound(1, want_a), "log 1.5");
  o.require(std::abs(b - want_b) <= summation_bound(2, want_b), "log 2 + log 1.2");
  o.require(c == 0.0, "zero for the closed unit disc");
  return o;
}

// 3. Conjugacy with the full shift and the embedded cube slopes.
Outcome criterion3() {
  Outcome o;
  const SequenceRule two = SequenceRule::constant(2.0);
  const Operator b = Operator::backward_shift(two);
  const SpaceSpec l2 = SpaceSpec::lp(2.0);
  for (int n : {2, 3, 4}) {
    const ConjugacyReport r = verify_conjugacy(two, n, 1000, 64, 0.0, 1000 + static_cast<std::uint64_t>(n));
    o.detail << " N=" << n << ": deviation " << r.max_deviation;
    o.require(r.samples == 1000 && r.max_deviation == 0.0, "conjugacy N=" + std::to_string(n));

    const std::size_t depth = n == 4 ? 5 : 8;
    const CompactSample k = cube_sample(n, depth, two, 0, 0);
    std::vector<int> ns;
    for (int i = 1; i <= static_cast<int>(depth); ++i) ns.push_back(i);
    const EntropyTable table = sn_table(b, k, ns, {0.5, 0.25, 0.125, 0.0625}, l2);
    const double oracle = std::log(static_cast<double>(n));
    try {
      const EntropyEstimate e = entropy_estimate(table);
      const double rel = std::abs(e.h_estimate - oracle) / oracle;
      o.detail << ", cube slope " << e.h_estimate << " at eps=" << e.h_epsilon << " vs " << oracle << " ("
               << rel * 100 << "%);";
      o.require(rel <= 0.10, "cube slope N=" + std::to_string(n));
    } catch (const std::exception& ex) {
      // no usable row: show how many leading cells each epsilon kept
      o.detail << ", cube slope unavailable (" << ex.what() << "); usable cells per eps:";
      for (double eps : table.epsilons) {
        int usable = 0;
        for (int i : ns) {
          const auto& c = table.at(i, eps);
          if (c.saturated || c.resolution_limited) break;
          ++usable;
        }
        o.detail << " " << eps << "->" << usable;
      }
      o.detail << ";";
      o.require(false, "cube slope N=" + std::to_string(n));
    }
  }
  // certified lower bounds log N for growing alphabets
  double prev = 0.0;
  o.detail << " lower bounds:";
  for (int n = 2; n <= 256; n *= 2) {
    const ConjugacyReport r = verify_conjugacy(two, n, 200, 64, 0.0, 7);
    const double h = std::log(static_cast<double>(n));
    o.require(r.passed && h > prev, "lower-bound sequence at N=" + std::to_string(n));
    o.detail << " " << h;
    prev = h;
  }
  return o;
}

// 4. Shadowing on random schedules.
Outcome criterion4() {
  Outcome o;
  const auto t0 = Clock::now();
  const Operator b = Operator::backward_shift(SequenceRule::constant(2.0));
  const SpaceSpec fagg = SpaceSpec::faggregate(SpaceSpec::lp(2.0));
  Rng rng(4);
  int certified = 0;
  int below = 0;
  int periodic = 0;
  int total = 0;
  for (double eps : {0.1, 0.01}) {
    const int gap = sp_constant(eps);
    for (int t = 0; t < 100; ++t) {
      SegmentSchedule s;
      s.gap = gap;
      int time = integer(rng, 0, 5);
      const int segs = integer(rng, 1, 3);
      for (int i = 0; i < segs; ++i) {
        const int len = integer(rng, 0, 6);
        std::vector<double> y(static_cast<std::size_t>(time + len + integer(rng, 1, 8)));
        for (auto& c : y) c = uniform(rng, -2.0, 2.0);
        s.segments.push_back({time, time + len, Vector::real(y)});
        time += len + gap + integer(rng, 0, 4);
      }
      const ShadowReport r = shadow_point(b, s, fagg, {eps, 0});
      // the aggregated norm is capped at 2^-N once every coordinate block saturates, so the
      // per-segment bound can be attained: gate on <= and count the strict cases separately
      bool within = r.certified;
      bool strict = r.certified;
      for (const auto& d : r.deviations) {
        within = within && d.max_deviation + d.tail_bound <= std::ldexp(1.0, -gap);
        strict = strict && d.max_deviation + d.tail_bound < std::ldexp(1.0, -gap);
      }
      certified += within ? 1 : 0;
      below += strict ? 1 : 0;
      periodic += r.exactly_periodic ? 1 : 0;
      ++total;
    }
  }
  const double secs = seconds_since(t0);
  o.detail << " " << certified << "/" << total << " certified within 2^-N (" << below << " strictly below), " << periodic << "/" << total
           << " exactly periodic, " << secs << "s";
  o.require(certified == total, "certification");
  o.require(periodic == total, "exact periodicity");
  o.require(secs < 30.0, "runtime");
  return o;
}

// 5. Separated families from fixed anchors.
Outcome criterion5() {
  Outcome o;
  const Operator b = Operator::backward_shift(SequenceRule::constant(2.0));
  const SpaceSpec fagg = SpaceSpec::faggregate(SpaceSpec::lp(2.0));
  const double eps = 0.1;
  const std::size_t dim = 64;
  for (int m : {2, 5, 10}) {
    std::vector<Vector> anchors;
    for (int c = 0; c < m; ++c) {
      std::vector<double> v(dim);
      for (std::size_t i = 0; i < dim; ++i) v[i] = c * std::ldexp(1.0, -static_cast<int>(i));
      anchors.push_back(Vector::real(v));
    }
    for (int n : {2, 3, 4}) {
      const auto t0 = Clock::now();
      const SeparatedFamily f = sp_separated_family(b, anchors, n, eps, 1, fagg);
      const std::size_t want = static_cast<std::size_t>(std::llround(std::pow(m, n)));
      const int n_prime = (n - 1) * (f.gap + 1);
      const EntropyTable t = sn_table(b, f.family, {n_prime}, {eps}, fagg, {CountMethod::greedy, 4});
      const std::size_t count = t.count(n_prime, eps);
      o.detail << " m=" << m << ",n=" << n << ": " << f.family.size() << " pts, s_" << n_prime << "=" << count
               << " (" << seconds_since(t0) << "s);";
      o.require(f.certified && f.family.size() == want, "family m=" + std::to_string(m) + " n=" + std::to_string(n));
      o.require(count >= want, "table count m=" + std::to_string(m) + " n=" + std::to_string(n));
    }
  }
  double prev = 0.0;
  o.detail << " bounds at N=4:";
  for (int m = 2; m <= 1 << 20; m *= 4) {
    const double h = sp_entropy_lower_bound(m, 4, 1);
    o.require(h > prev, "lower bound increasing");
    o.detail << " " << h;
    prev = h;
  }
  return o;
}

// 6. Lemma suite as properties.
Outcome criterion6() {
  Outcome o;
  Rng rng(6);
  int power_ok = 0;
  int sum_ok = 0;
  for (int t = 0; t < 100; ++t) {
    const auto la = random_eigenvalues(rng, integer(rng, 1, 6), 0.1, 4.0);
    const auto lb = random_eigenvalues(rng, integer(rng, 1, 6), 0.1, 4.0);
    const int m = integer(rng, 2, 7);
    const Operator a = Operator::diagonal(la);
    const double ha = spectral_entropy(spectrum(a));
    const double hb = spectral_entropy(spectrum(Operator::diagonal(lb)));
    const double hp = spectral_entropy(spectrum(Operator::power(a, m)));
    const double hs = spectral_entropy(spectrum(Operator::direct_sum({a, Operator::diagonal(lb)})));
    const double oracle = log_plus_sum(la, m);
    const std::size_t terms = la.size() + lb.size();
    if (std::abs(hp - m * ha) <= summation_bound(terms, hp) && std::abs(hp - oracle) <= summation_bound(terms, hp)) {
      ++power_ok;
    }
    if (std::abs(hs - (ha + hb)) <= summation_bound(terms, hs)) ++sum_ok;
  }
  o.detail << " power rule " << power_ok << "/100, direct sum " << sum_ok << "/100;";
  o.require(power_ok == 100, "power rule");
  o.require(sum_ok == 100, "direct sum");

  const SpaceSpec l2 = SpaceSpec::lp(2.0);
  int nested_ok = 0;
  for (int t = 0; t < 100; ++t) {
    const Operator op = Operator::dense(1.3 * random_matrix(rng, 2));
    std::vector<Vector> pts;
    for (int i = 0; i < 16; ++i) pts.push_back(Vector::real({uniform(rng, 0, 1), uniform(rng, 0, 1)}));
    const CompactSample k = CompactSample::make(pts, 0.0);
    pts.resize(static_cast<std::size_t>(integer(rng, 1, 15)));
    const CompactSample sub = CompactSample::make(pts, 0.0);
    const std::vector<int> ns = {1, 2, 3, 4};
    const std::vector<double> eps = {0.4, 0.2, 0.1};
    const EntropyTable big = sn_table(op, k, ns, eps, l2, {CountMethod::exact, 1});
    const EntropyTable small = sn_table(op, sub, ns, eps, l2, {CountMethod::exact, 1});
    bool ok = true;
    for (std::size_t i = 0; i < big.entries.size(); ++i) ok = ok && small.entries[i].count <= big.entries[i].count;
    nested_ok += ok ? 1 : 0;
  }
  o.detail << " nested samples " << nested_ok << "/100;";
  o.require(nested_ok == 100, "subsample monotonicity");

  int flat = 0;
  const int contraction_cases = 20;
  for (int t = 0; t < contraction_cases; ++t) {
    Matrix a = random_matrix(rng, 2);
    a *= uniform(rng, 0.3, 0.999) / Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
    if (t == 0) a = Matrix::Identity(2, 2);
    if (t == 1) a << 0, 1, 1, 0;
    const EntropyTable tab =
        sn_table(Operator::dense(a), unit_cube_grid(2, 24), {1, 2, 3, 4, 5, 6}, {0.3, 0.15, 0.08}, l2);
    const EntropyEstimate e = entropy_estimate(tab);
    bool zero = e.h_estimate == 0.0;
    for (const auto& s : e.slopes) zero = zero && (!s.valid || s.slope == 0.0);
    flat += zero ? 1 : 0;
  }
  o.detail << " contractions with zero slope " << flat << "/" << contraction_cases << ";";
  o.require(flat == contraction_cases, "contraction slope");

  int found = 0;
  for (int t = 0; t < 20; ++t) {
    const int d = integer(rng, 2, 5);
    Matrix a = random_matrix(rng, d);
    const double r = Eigen::ComplexEigenSolver<Matrix>(a).eigenvalues().cwiseAbs().maxCoeff();
    a *= uniform(rng, 0.3, 0.95) / r;
    const ContractionPower c = contraction_power(Operator::dense(a), 5000);
    if (c.n) {
      Matrix p = Matrix::Identity(d, d);
      for (int i = 0; i < *c.n; ++i) p = p * a;
      if (Eigen::JacobiSVD<Matrix>(p).singularValues()(0) < 1.0) ++found;
    }
  }
  o.detail << " contraction powers found " << found << "/20";
  o.require(found == 20, "contraction_power");
  return o;
}

// 7. The variational gap.
Outcome criterion7() {
  Outcome o;
  const GapReport h = variational_gap(Operator::diagonal({2.0, 0.5}), 12);
  Matrix rot(2, 2);
  const double t = 2 * std::numbers::pi / 5;
  rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  const GapReport r = variational_gap(Operator::dense(rot), 12);
  o.detail << " diag(2,0.5): (" << h.h_top << ", " << h.best_h_mu << ", " << h.gap << "), " << h.periodic_points
           << " periodic points, max off-center " << h.max_offending << "; rotation: (" << r.h_top << ", "
           << r.best_h_mu << ", " << r.gap << ")";
  o.require(h.h_top == std::log(2.0) && h.best_h_mu == 0.0 && h.gap == std::log(2.0), "diag(2,0.5) triple");
  o.require(h.periods_searched == 12 && h.all_in_center && h.max_offending < 1e-9, "center support");
  o.require(r.h_top == 0.0 && r.best_h_mu == 0.0 && r.gap == 0.0, "rotation triple");
  o.require(h.scope.find("periodic-orbit measures only") != std::string::npos, "scope statement");
  return o;
}

// 8. Greedy against the exact maximum.
Outcome criterion8() {
  Outcome o;
  Rng rng(8);
  const SpaceSpec l2 = SpaceSpec::lp(2.0);
  int dominated = 0;
  int equal = 0;
  for (int t = 0; t < 200; ++t) {
    const int size = integer(rng, 2, 20);
    const int dim = integer(rng, 1, 3);
    std::vector<Vector> pts;
    for (int i = 0; i < size; ++i) {
      std::vector<double> c(static_cast<std::size_t>(dim));
      for (auto& x : c) x = uniform(rng, 0, 1);
      pts.push_back(Vector::real(c));
    }
    const CompactSample k = CompactSample::make(pts, 0.0);
    const Operator op = Operator::dense(1.5 * random_matrix(rng, dim));
    const int n = integer(rng, 1, 4);
    const double eps = uniform(rng, 0.05, 0.6);
    const std::size_t g = greedy_separated(op, k, n, eps, l2).size();
    const std::size_t x = max_separated_exact(op, k, n, eps, l2).size();
    dominated += x >= g ? 1 : 0;
    equal += x == g ? 1 : 0;
  }
  o.detail << " exact >= greedy in " << dominated << "/200; equal in " << equal << "/200 (" << equal / 2.0
           << "%, diagnostic target 70%)";
  o.require(dominated == 200, "exact >= greedy");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"spectral formula reproduced by separated-set slopes", criterion1},
      {"spectral entropy of compact diagonals", criterion2},
      {"full-shift conjugacy and embedded cube slopes", criterion3},
      {"shadowing on random schedules", criterion4},
      {"separated families and their lower bounds", criterion5},
      {"power, direct sum, subsample and contraction laws", criterion6},
      {"variational gap", criterion7},
      {"greedy against exact separated sets", criterion8},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("[%s] criterion %zu: %s (%.1fs)%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
