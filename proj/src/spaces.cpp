#include "entrolab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "entrolab/errors.hpp"

namespace entrolab {

namespace {

void require_finite(std::span<const Complex> coords) {
  for (const auto& c : coords) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw ValidationError("vector has a non-finite coordinate");
    }
  }
}

Complex padded(std::span<const Complex> a, std::size_t i) {
  return i < a.size() ? a[i] : Complex{};
}

}  // namespace

Vector::Vector(std::vector<Complex> coords, std::string space_id)
    : coords_(std::move(coords)), space_id_(std::move(space_id)) {
  require_finite(coords_);
}

Vector Vector::zeros(std::size_t dim, std::string space_id) {
  return Vector(std::vector<Complex>(dim), std::move(space_id));
}

Vector Vector::basis(std::size_t n, std::size_t dim, std::string space_id) {
  if (n == 0 || n > dim) throw ValidationError("basis index out of range");
  std::vector<Complex> c(dim);
  c[n - 1] = 1.0;
  return Vector(std::move(c), std::move(space_id));
}

Vector Vector::real(const std::vector<double>& coords, std::string space_id) {
  return Vector(std::vector<Complex>(coords.begin(), coords.end()), std::move(space_id));
}

bool Vector::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](Complex c) { return c == Complex{}; });
}

Vector Vector::resized(std::size_t dim) const {
  std::vector<Complex> c(dim);
  std::copy_n(coords_.begin(), std::min(dim, coords_.size()), c.begin());
  return Vector(std::move(c), space_id_);
}

Vector Vector::with_space(std::string space_id) const {
  Vector v = *this;
  v.space_id_ = std::move(space_id);
  return v;
}

bool operator==(const Vector& a, const Vector& b) {
  if (a.space_id_ != b.space_id_) return false;
  const std::size_t d = std::max(a.dim(), b.dim());
  for (std::size_t i = 0; i < d; ++i) {
    if (padded(a.coords_, i) != padded(b.coords_, i)) return false;
  }
  return true;
}

namespace {

Vector combine(const Vector& a, const Vector& b, double sign) {
  if (a.space_id() != b.space_id()) throw ValidationError("vectors live in different spaces");
  const std::size_t d = std::max(a.dim(), b.dim());
  std::vector<Complex> c(d);
  for (std::size_t i = 0; i < d; ++i) {
    c[i] = padded(a.coords(), i) + sign * padded(b.coords(), i);
  }
  return Vector(std::move(c), a.space_id());
}

}  // namespace

Vector operator+(const Vector& a, const Vector& b) { return combine(a, b, 1.0); }
Vector operator-(const Vector& a, const Vector& b) { return combine(a, b, -1.0); }

Vector operator*(Complex alpha, const Vector& v) {
  std::vector<Complex> c(v.coords().begin(), v.coords().end());
  for (auto& x : c) x *= alpha;
  return Vector(std::move(c), v.space_id());
}

bool lex_less(const Vector& a, const Vector& b) {
  const std::size_t d = std::max(a.dim(), b.dim());
  for (std::size_t i = 0; i < d; ++i) {
    const Complex x = padded(a.coords(), i);
    const Complex y = padded(b.coords(), i);
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

SpaceSpec SpaceSpec::lp(double p, std::string label) {
  if (!(p >= 1.0)) throw ValidationError("lp space needs p >= 1");
  SpaceSpec s;
  s.kind_ = Kind::lp;
  s.p_ = p;
  s.label_ = std::move(label);
  return s;
}

SpaceSpec SpaceSpec::faggregate(const SpaceSpec& base, std::string label) {
  if (base.kind() != Kind::lp) throw ValidationError("faggregate base must be an lp space");
  SpaceSpec s;
  s.kind_ = Kind::faggregate;
  s.p_ = base.p();
  s.base_ = std::make_shared<const SpaceSpec>(base);
  s.label_ = std::move(label);
  return s;
}

const SpaceSpec& SpaceSpec::base() const {
  if (!base_) throw ValidationError("lp space has no base norm");
  return *base_;
}

std::string SpaceSpec::describe() const {
  std::ostringstream os;
  auto lp_name = [&os](double p) {
    if (std::isinf(p)) {
      os << "l^inf";
    } else {
      os << "l^" << p;
    }
  };
  if (kind_ == Kind::lp) {
    lp_name(p_);
  } else {
    os << "faggregate(";
    lp_name(p_);
    os << ")";
  }
  return os.str();
}

namespace detail {

double lp_norm_diff(std::span<const Complex> a, std::span<const Complex> b, double p) {
  const std::size_t d = std::max(a.size(), b.size());
  if (p == 2.0) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const Complex z = padded(a, i) - padded(b, i);
      acc += z.real() * z.real() + z.imag() * z.imag();
    }
    return std::sqrt(acc);
  }
  if (p == 1.0) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) acc += std::abs(padded(a, i) - padded(b, i));
    return acc;
  }
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < d; ++i) m = std::max(m, std::abs(padded(a, i) - padded(b, i)));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) acc += std::pow(std::abs(padded(a, i) - padded(b, i)), p);
  return std::pow(acc, 1.0 / p);
}

namespace {

// Walks the partial norms ||pi_i (a - b)||_base for i = 1..d and feeds each
// weighted term to `sink`; stops early when sink returns false.
template <class Sink>
void faggregate_terms(std::span<const Complex> a, std::span<const Complex> b, double p,
                      Sink&& sink) {
  const std::size_t d = std::max(a.size(), b.size());
  double acc = 0.0;  // power sum (or running max for p = inf)
  for (std::size_t i = 0; i < d; ++i) {
    const Complex z = padded(a, i) - padded(b, i);
    double partial;
    if (p == 2.0) {
      acc += z.real() * z.real() + z.imag() * z.imag();
      partial = std::sqrt(acc);
    } else if (p == 1.0) {
      acc += std::abs(z);
      partial = acc;
    } else if (std::isinf(p)) {
      acc = std::max(acc, std::abs(z));
      partial = acc;
    } else {
      acc += std::pow(std::abs(z), p);
      partial = std::pow(acc, 1.0 / p);
    }
    const double term = std::ldexp(std::min(1.0, partial), -static_cast<int>(i + 1));
    if (!sink(term)) return;
  }
}

}  // namespace

double faggregate_norm_diff(std::span<const Complex> a, std::span<const Complex> b, double p) {
  double sum = 0.0;
  faggregate_terms(a, b, p, [&sum](double t) {
    sum += t;
    return true;
  });
  return sum;
}

bool faggregate_diff_exceeds(std::span<const Complex> a, std::span<const Complex> b, double p,
                             double eps) {
  double sum = 0.0;
  bool exceeded = false;
  faggregate_terms(a, b, p, [&](double t) {
    sum += t;
    exceeded = sum > eps;
    return !exceeded;
  });
  return exceeded;
}

double norm_diff(std::span<const Complex> a, std::span<const Complex> b, const SpaceSpec& s) {
  return s.kind() == SpaceSpec::Kind::lp ? lp_norm_diff(a, b, s.p())
                                         : faggregate_norm_diff(a, b, s.p());
}

bool diff_exceeds(std::span<const Complex> a, std::span<const Complex> b, const SpaceSpec& s,
                  double eps) {
  return s.kind() == SpaceSpec::Kind::lp ? lp_norm_diff(a, b, s.p()) > eps
                                         : faggregate_diff_exceeds(a, b, s.p(), eps);
}

}  // namespace detail

double norm(const Vector& v, const SpaceSpec& s) { return norm_with_tail(v, s).value; }

TruncatedNorm norm_with_tail(const Vector& v, const SpaceSpec& s) {
  TruncatedNorm out;
  out.value = detail::norm_diff(v.coords(), {}, s);
  if (s.kind() == SpaceSpec::Kind::faggregate) {
    out.tail_bound = std::ldexp(1.0, -static_cast<int>(v.dim()));
  }
  return out;
}

double distance(const Vector& x, const Vector& y, const SpaceSpec& s) {
  if (x.space_id() != y.space_id()) throw ValidationError("distance between different spaces");
  return detail::norm_diff(x.coords(), y.coords(), s);
}

bool distance_exceeds(const Vector& x, const Vector& y, const SpaceSpec& s, double eps) {
  if (x.space_id() != y.space_id()) throw ValidationError("distance between different spaces");
  return detail::diff_exceeds(x.coords(), y.coords(), s, eps);
}

Vector project(const Vector& v, std::size_t i) {
  if (i == 0) throw ValidationError("projection index must be >= 1");
  std::vector<Complex> c(v.coords().begin(), v.coords().end());
  for (std::size_t k = i; k < c.size(); ++k) c[k] = Complex{};
  return Vector(std::move(c), v.space_id());
}

}  // namespace entrolab
