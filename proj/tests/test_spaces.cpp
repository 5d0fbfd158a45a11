#include <doctest.h>

#include <cmath>

#include "entrolab/errors.hpp"
#include "entrolab/spaces.hpp"
#include "gen.hpp"

using namespace entrolab;

namespace {
const SpaceSpec l1 = SpaceSpec::lp(1.0);
const SpaceSpec l2 = SpaceSpec::lp(2.0);
const SpaceSpec linf = SpaceSpec::lp(INFINITY);
const SpaceSpec fagg2 = SpaceSpec::faggregate(l2);
const SpaceSpec fagg1 = SpaceSpec::faggregate(l1);
}  // namespace

TEST_CASE("vector construction and indexing") {
  const Vector v = Vector::real({1, 2, 3});
  CHECK(v.dim() == 3);
  CHECK(v.coord(1) == Complex(1));
  CHECK(v.coord(3) == Complex(3));
  CHECK(v.coord(4) == Complex(0));
  CHECK(v.coord(0) == Complex(0));
  CHECK_THROWS_AS(Vector({Complex(NAN, 0)}), ValidationError);
  CHECK_THROWS_AS(Vector({Complex(0, INFINITY)}), ValidationError);
  CHECK(Vector::basis(2, 4) == Vector::real({0, 1, 0, 0}));
  // zero padding in comparisons and arithmetic
  CHECK(Vector::real({1, 0, 0}) == Vector::real({1}));
  CHECK((Vector::real({1}) + Vector::real({0, 2})) == Vector::real({1, 2}));
  CHECK_THROWS_AS(Vector::real({1}, "a") + Vector::real({1}, "b"), ValidationError);
}

TEST_CASE("lp norms") {
  CHECK(norm(Vector::basis(1, 5), l2) == 1.0);
  CHECK(norm(Vector::real({1, 1}), l1) == 2.0);
  CHECK(norm(Vector::real({3, 4}), l2) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(norm(Vector::real({3, -4}), linf) == 4.0);
  CHECK(norm(Vector({Complex(3, 4)}), l1) == doctest::Approx(5.0));
  const double p = 3.0;
  CHECK(norm(Vector::real({1, 2, 2}), SpaceSpec::lp(p)) == doctest::Approx(std::cbrt(17.0)));
  CHECK_THROWS_AS(SpaceSpec::lp(0.5), ValidationError);
  CHECK_THROWS_AS(SpaceSpec::faggregate(fagg2), ValidationError);
}

TEST_CASE("aggregated F-norm of e_1 with its tail bound") {
  for (std::size_t dim : {1u, 3u, 10u, 40u}) {
    const TruncatedNorm t = norm_with_tail(Vector::basis(1, dim), fagg1);
    double oracle = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) oracle += std::pow(2.0, -static_cast<double>(i));
    CHECK(t.value == doctest::Approx(oracle).epsilon(1e-15));
    CHECK(t.value == doctest::Approx(1.0 - std::ldexp(1.0, -static_cast<int>(dim))).epsilon(1e-15));
    CHECK(t.tail_bound == std::ldexp(1.0, -static_cast<int>(dim)));
  }
}

TEST_CASE("aggregated F-norm uses partial projections") {
  // pi_1 x = (0.5), pi_2 x = (0.5, 3): terms 2^-1 * 0.5 + 2^-2 * min(1, ...) + ...
  const Vector x = Vector::real({0.5, 3.0, 0.0});
  CHECK(norm(x, fagg2) == doctest::Approx(0.25 + 0.25 + 0.125));
}

TEST_CASE("distance examples") {
  CHECK(distance(Vector::basis(3, 4), Vector::basis(3, 4), l2) == 0.0);
  CHECK(distance(Vector::basis(1, 2), Vector::zeros(2), l2) == 1.0);
  CHECK(distance(Vector::real({2}), Vector::real({1}), l1) == 1.0);
  CHECK(distance(Vector::real({1, 2, 3}), Vector::real({1}), l1) == 5.0);
  CHECK_THROWS_AS(distance(Vector::real({1}, "a"), Vector::real({1}, "b"), l2), ValidationError);
}

TEST_CASE("project") {
  CHECK(project(Vector::real({1, 2, 3}), 2) == Vector::real({1, 2, 0}));
  CHECK(project(Vector::zeros(4), 5).is_zero());
  CHECK(project(Vector::real({1, 2, 3}), 7) == Vector::real({1, 2, 3}));
  CHECK_THROWS_AS(project(Vector::real({1}), 0), ValidationError);
}

TEST_CASE("lex order is by real then imaginary part") {
  CHECK(lex_less(Vector::real({0, 5}), Vector::real({1, 0})));
  CHECK(lex_less(Vector({Complex(1, 0)}), Vector({Complex(1, 1)})));
  CHECK_FALSE(lex_less(Vector::real({1}), Vector::real({1, 0})));
}

TEST_CASE("property: F-norm axioms and metric axioms on random vectors") {
  gen::Rng rng(20240611);
  const SpaceSpec spaces[] = {l1, l2, linf, SpaceSpec::lp(1.7), fagg1, fagg2, SpaceSpec::faggregate(linf)};
  for (int t = 0; t < 300; ++t) {
    const std::size_t dim = static_cast<std::size_t>(gen::integer(rng, 1, 12));
    const Vector x = gen::vector(rng, dim, 3.0);
    const Vector y = gen::vector(rng, dim, 3.0);
    const Vector z = gen::vector(rng, dim, 3.0);
    const Complex lam = std::polar(gen::uniform(rng, 0.0, 0.999), gen::uniform(rng, 0.0, 6.28));
    for (const auto& s : spaces) {
      CHECK(distance(x, z, s) <= distance(x, y, s) + distance(y, z, s) + 1e-12);
      CHECK(distance(x, y, s) == doctest::Approx(distance(y, x, s)).epsilon(1e-14));
      CHECK(norm(lam * x, s) <= norm(x, s) + 1e-12);
      CHECK(norm(x, s) > 0.0);
      CHECK(distance(x, x, s) == 0.0);
      // distance_exceeds must agree with the full computation
      const double eps = gen::uniform(rng, 0.0, 2.0 * distance(x, y, s));
      CHECK(distance_exceeds(x, y, s, eps) == (distance(x, y, s) > eps));
    }
    // ||2^-j x|| -> 0
    for (const auto& s : spaces) CHECK(norm(std::ldexp(1.0, -60) * x, s) < 1e-12);
    // project is linear and norm-nonincreasing in lp
    const std::size_t i = static_cast<std::size_t>(gen::integer(rng, 1, 12));
    CHECK(project(x + y, i) == project(x, i) + project(y, i));
    CHECK(project(project(x, i), i) == project(x, i));
    for (const auto& s : {l1, l2, linf}) CHECK(norm(project(x, i), s) <= norm(x, s) + 1e-12);
  }
}
