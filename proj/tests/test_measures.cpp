#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entrolab/errors.hpp"
#include "entrolab/measures.hpp"
#include "entrolab/specification.hpp"
#include "gen.hpp"

using namespace entrolab;

namespace {

Matrix rotation(double t) {
  Matrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

}  // namespace

TEST_CASE("orbit measures") {
  const OrbitMeasure d0 = orbit_measure(Operator::diagonal({2.0, 0.5}), Vector::zeros(2), 1);
  CHECK(d0.atoms.size() == 1);
  CHECK(d0.atoms[0].mass == 1.0);

  const Operator rot = Operator::dense(rotation(2 * std::numbers::pi / 3));
  const OrbitMeasure tri = orbit_measure(rot, Vector::basis(1, 2), 3);
  REQUIRE(tri.atoms.size() == 3);
  for (const auto& a : tri.atoms) CHECK(a.mass == doctest::Approx(1.0 / 3));
  CHECK(check_invariance(rot, tri).invariant);

  const OrbitMeasure fixed = orbit_measure(Operator::diagonal({1.0, 2.0}), Vector::basis(1, 2), 1);
  CHECK(fixed.atoms[0].point == Vector::basis(1, 2));

  CHECK_THROWS_AS(orbit_measure(Operator::diagonal({2.0, 1.0}), Vector::real({1, 1}), 1), ValidationError);
  CHECK_THROWS_AS(orbit_measure(rot, Vector::basis(1, 2), 2), ValidationError);
}

TEST_CASE("metric entropy of periodic measures is zero") {
  const OrbitMeasure d0 = orbit_measure(Operator::diagonal({2.0}), Vector::zeros(1), 1);
  CHECK(metric_entropy_periodic(d0).value == 0.0);
  const Operator rot = Operator::dense(rotation(2 * std::numbers::pi / 3));
  const MetricEntropy m = metric_entropy_periodic(orbit_measure(rot, Vector::real({0.3, -2}), 3));
  CHECK(m.value == 0.0);
  CHECK(m.certificate.find('3') != std::string::npos);
}

TEST_CASE("support in center") {
  const Operator h = Operator::diagonal({2.0, 0.5});
  CHECK(support_in_center(orbit_measure(h, Vector::zeros(2), 1), riesz_split(h), kCenterTol).in_center);

  const Operator c = Operator::diagonal({2.0, 1.0, 0.5});
  CHECK(support_in_center(orbit_measure(c, Vector::basis(2, 3), 1), riesz_split(c), kCenterTol).in_center);

  // a hand-built atom off the center; orbit_measure itself refuses the point
  const Operator u = Operator::diagonal({2.0, 1.0});
  OrbitMeasure mu;
  mu.atoms = {{Vector::real({1, 1}), 1.0}};
  const SupportReport r = support_in_center(mu, riesz_split(u), kCenterTol);
  CHECK_FALSE(r.in_center);
  CHECK(r.max_offending == doctest::Approx(1.0));
  CHECK_THROWS_AS(orbit_measure(u, Vector::real({1, 1}), 1), ValidationError);
  // brute force: no period up to 12 makes e_1 + e_2 periodic
  for (int k = 1; k <= 12; ++k) CHECK_THROWS_AS(orbit_measure(u, Vector::real({1, 1}), k), ValidationError);
}

TEST_CASE("variational gap examples") {
  const GapReport h = variational_gap(Operator::diagonal({2.0, 0.5}), 12);
  CHECK(h.h_top == std::log(2.0));
  CHECK(h.best_h_mu == 0.0);
  CHECK(h.gap == std::log(2.0));
  CHECK(h.all_in_center);
  CHECK(h.center_dim == 0);
  CHECK_FALSE(h.scope.empty());

  const GapReport r = variational_gap(Operator::dense(rotation(2 * std::numbers::pi / 5)), 12);
  CHECK(r.h_top == 0.0);
  CHECK(r.gap == 0.0);
  CHECK(r.center_dim == 2);

  CHECK(variational_gap(Operator::diagonal({3.0}), 12).gap == std::log(3.0));
  CHECK_THROWS_AS(variational_gap(Operator::identity(9), 2), ValidationError);
}

TEST_CASE("property: periodic points of hyperbolic-plus-center matrices lie in the center") {
  gen::Rng rng(61);
  for (int t = 0; t < 25; ++t) {
    // block diag(hyperbolic, rational rotation) conjugated by a random matrix
    const int q = gen::integer(rng, 2, 6);
    const double u = gen::uniform(rng, 1.3, 3.0);
    const double s = gen::uniform(rng, 0.1, 0.7);
    Matrix d = Matrix::Zero(4, 4);
    d(0, 0) = u;
    d(1, 1) = s;
    d.block(2, 2, 2, 2) = rotation(2 * std::numbers::pi / q);
    const Matrix p = Matrix::Identity(4, 4) + gen::matrix(rng, 4, 0.3);
    const Matrix a = p * d * p.inverse();
    const Operator op = Operator::dense(a);
    const GapReport g = variational_gap(op, 12);
    CHECK(g.all_in_center);
    CHECK(g.max_offending < 1e-9);
    CHECK(g.center_dim == 2);
    CHECK(g.h_top == doctest::Approx(std::log(u)).epsilon(1e-9));
    CHECK(g.gap > 0.0);
    // orbit measures from the periodic subspace are invariant
    const auto basis = linear_periodic_points(op, q);
    REQUIRE(basis.size() == 2);
    const OrbitMeasure mu = orbit_measure(op, basis[0], q);
    CHECK(check_invariance(op, mu).invariant);
    CHECK(support_in_center(mu, riesz_split(op), kCenterTol).in_center);
  }
}

TEST_CASE("property: gap is positive exactly when spectral entropy is") {
  gen::Rng rng(67);
  for (int t = 0; t < 30; ++t) {
    const auto lam = gen::eigenvalues(rng, static_cast<std::size_t>(gen::integer(rng, 1, 4)), 0.2, 2.0);
    bool any_off = true;
    for (auto z : lam) any_off = any_off && std::abs(std::abs(z) - 1.0) > 1e-3;
    if (!any_off) continue;
    const GapReport g = variational_gap(Operator::diagonal(lam), 6);
    CHECK((g.gap > 0.0) == (g.h_top > 0.0));
    CHECK(g.gap == g.h_top);
  }
}
