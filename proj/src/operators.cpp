#include "entrolab/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "entrolab/errors.hpp"

namespace entrolab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_complex(Complex c) {
  std::ostringstream os;
  if (c.imag() == 0.0) {
    os << c.real();
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- rules

SequenceRule SequenceRule::list(std::vector<Complex> values) {
  if (values.empty()) throw ValidationError("explicit sequence must be nonempty");
  SequenceRule r;
  r.kind_ = Kind::list;
  r.values_ = std::move(values);
  return r;
}

SequenceRule SequenceRule::constant(Complex value) {
  SequenceRule r;
  r.kind_ = Kind::constant;
  r.first_ = value;
  return r;
}

SequenceRule SequenceRule::geometric(Complex first, Complex ratio) {
  SequenceRule r;
  r.kind_ = Kind::geometric;
  r.first_ = first;
  r.ratio_ = ratio;
  return r;
}

SequenceRule SequenceRule::harmonic() {
  SequenceRule r;
  r.kind_ = Kind::harmonic;
  return r;
}

Complex SequenceRule::at(std::size_t n) const {
  if (n == 0) throw ValidationError("sequence index must be >= 1");
  switch (kind_) {
    case Kind::list:
      if (n > values_.size()) throw ValidationError("index past the end of an explicit sequence");
      return values_[n - 1];
    case Kind::constant:
      return first_;
    case Kind::geometric:
      return first_ * std::pow(ratio_, static_cast<double>(n - 1));
    case Kind::harmonic:
      return Complex(1.0 / static_cast<double>(n + 1));
  }
  return {};
}

std::optional<std::size_t> SequenceRule::length() const {
  if (kind_ == Kind::list) return values_.size();
  return std::nullopt;
}

bool SequenceRule::has_zero() const {
  switch (kind_) {
    case Kind::list:
      return std::any_of(values_.begin(), values_.end(), [](Complex c) { return c == Complex{}; });
    case Kind::constant:
      return first_ == Complex{};
    case Kind::geometric:
      return first_ == Complex{} || ratio_ == Complex{};
    case Kind::harmonic:
      return false;
  }
  return false;
}

bool SequenceRule::decays_to_zero() const {
  switch (kind_) {
    case Kind::list:
      return true;
    case Kind::constant:
      return first_ == Complex{};
    case Kind::geometric:
      return first_ == Complex{} || std::abs(ratio_) < 1.0;
    case Kind::harmonic:
      return true;
  }
  return false;
}

double SequenceRule::tail_sup(std::size_t after) const {
  switch (kind_) {
    case Kind::list: {
      double m = 0.0;
      for (std::size_t i = after; i < values_.size(); ++i) m = std::max(m, std::abs(values_[i]));
      return m;
    }
    case Kind::constant:
      return std::abs(first_);
    case Kind::geometric: {
      const double a = std::abs(first_);
      const double q = std::abs(ratio_);
      if (a == 0.0) return 0.0;
      if (q < 1.0) return a * std::pow(q, static_cast<double>(after));
      if (q == 1.0) return a;
      return std::numeric_limits<double>::infinity();
    }
    case Kind::harmonic:
      return 1.0 / static_cast<double>(after + 2);
  }
  return 0.0;
}

std::string SequenceRule::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::list:
      os << "list(";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        os << (i ? "," : "") << format_complex(values_[i]);
      }
      os << ")";
      break;
    case Kind::constant:
      os << "const(" << format_complex(first_) << ")";
      break;
    case Kind::geometric:
      os << "geometric(" << format_complex(first_) << "," << format_complex(ratio_) << ")";
      break;
    case Kind::harmonic:
      os << "harmonic";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------- operator

Operator Operator::backward_shift(SequenceRule weights) {
  if (weights.has_zero()) throw ValidationError("shift weights must be nonzero");
  return Operator(BackwardShift{std::move(weights)});
}

Operator Operator::forward_shift(SequenceRule weights) {
  if (weights.has_zero()) throw ValidationError("shift weights must be nonzero");
  return Operator(ForwardShift{std::move(weights)});
}

Operator Operator::diagonal(SequenceRule eigenvalues) {
  return Operator(Diagonal{std::move(eigenvalues)});
}

Operator Operator::diagonal(std::vector<Complex> eigenvalues) {
  return diagonal(SequenceRule::list(std::move(eigenvalues)));
}

Operator Operator::dense(Matrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw ValidationError("dense operator needs a nonempty square matrix");
  }
  if (static_cast<std::size_t>(entries.rows()) > kMaxDenseDim) {
    throw ValidationError("dense operator dimension exceeds 32");
  }
  if (!entries.allFinite()) throw ValidationError("dense operator has non-finite entries");
  return Operator(DenseMatrix{std::move(entries)});
}

Operator Operator::scaled(Complex alpha, Operator inner) {
  return Operator(Scaled{alpha, std::make_shared<const Operator>(std::move(inner))});
}

Operator Operator::direct_sum(std::vector<Operator> parts) {
  if (parts.empty()) throw ValidationError("direct sum needs at least one part");
  DirectSum sum;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i + 1 < parts.size() && !parts[i].finite_dim()) {
      throw ValidationError("only the last direct-sum part may be infinite dimensional");
    }
    sum.parts.push_back(std::make_shared<const Operator>(std::move(parts[i])));
  }
  return Operator(std::move(sum));
}

Operator Operator::power(Operator base, int exponent) {
  if (exponent < 1) throw ValidationError("operator power must be >= 1");
  return Operator(Power{std::make_shared<const Operator>(std::move(base)), exponent});
}

Operator Operator::identity(std::size_t dim) {
  return diagonal(std::vector<Complex>(dim, Complex(1.0)));
}

Operator Operator::rolewicz(Complex alpha) {
  return scaled(alpha, backward_shift(SequenceRule::constant(1.0)));
}

std::optional<std::size_t> Operator::finite_dim() const {
  return std::visit(
      Overloaded{
          [](const BackwardShift&) -> std::optional<std::size_t> { return std::nullopt; },
          [](const ForwardShift&) -> std::optional<std::size_t> { return std::nullopt; },
          [](const Diagonal& d) { return d.eigenvalues.length(); },
          [](const DenseMatrix& m) -> std::optional<std::size_t> {
            return static_cast<std::size_t>(m.entries.rows());
          },
          [](const Scaled& s) { return s.inner->finite_dim(); },
          [](const Power& p) { return p.base->finite_dim(); },
          [](const DirectSum& s) -> std::optional<std::size_t> {
            std::size_t total = 0;
            for (const auto& part : s.parts) {
              auto d = part->finite_dim();
              if (!d) return std::nullopt;
              total += *d;
            }
            return total;
          },
      },
      node_);
}

bool Operator::is_shift() const {
  return std::holds_alternative<BackwardShift>(node_) || std::holds_alternative<ForwardShift>(node_);
}

std::string Operator::describe() const {
  return std::visit(
      Overloaded{
          [](const BackwardShift& b) { return "B[" + b.weights.describe() + "]"; },
          [](const ForwardShift& f) { return "F[" + f.weights.describe() + "]"; },
          [](const Diagonal& d) { return "diag[" + d.eigenvalues.describe() + "]"; },
          [](const DenseMatrix& m) {
            return "dense[" + std::to_string(m.entries.rows()) + "x" +
                   std::to_string(m.entries.cols()) + "]";
          },
          [](const Scaled& s) { return format_complex(s.alpha) + "*" + s.inner->describe(); },
          [](const Power& p) {
            return "(" + p.base->describe() + ")^" + std::to_string(p.exponent);
          },
          [](const DirectSum& s) {
            std::string out = "sum(";
            for (std::size_t i = 0; i < s.parts.size(); ++i) {
              out += (i ? "," : "") + s.parts[i]->describe();
            }
            return out + ")";
          },
      },
      node_);
}

// ---------------------------------------------------------------- apply

namespace {

std::vector<Complex> apply_coords(const Operator& op, std::span<const Complex> x);

std::vector<Complex> apply_node(const BackwardShift& b, std::span<const Complex> x) {
  std::vector<Complex> out(x.size());
  for (std::size_t n = 1; n < x.size(); ++n) {
    if (x[n] != Complex{}) out[n - 1] = b.weights.at(n + 1) * x[n];
  }
  return out;
}

std::vector<Complex> apply_node(const ForwardShift& f, std::span<const Complex> x) {
  if (!x.empty() && x.back() != Complex{}) {
    throw ValidationError("forward shift: no headroom left in the truncation");
  }
  std::vector<Complex> out(x.size());
  for (std::size_t n = 0; n + 1 < x.size(); ++n) {
    if (x[n] != Complex{}) out[n + 1] = x[n] / f.weights.at(n + 2);
  }
  return out;
}

std::vector<Complex> apply_node(const Diagonal& d, std::span<const Complex> x) {
  if (auto len = d.eigenvalues.length(); len && *len != x.size()) {
    throw ValidationError("diagonal operator dimension mismatch");
  }
  std::vector<Complex> out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (x[n] != Complex{}) out[n] = d.eigenvalues.at(n + 1) * x[n];
  }
  return out;
}

std::vector<Complex> apply_node(const DenseMatrix& m, std::span<const Complex> x) {
  if (static_cast<std::size_t>(m.entries.cols()) != x.size()) {
    throw ValidationError("dense operator dimension mismatch");
  }
  ColumnVector v = Eigen::Map<const ColumnVector>(x.data(), static_cast<Eigen::Index>(x.size()));
  ColumnVector r = m.entries * v;
  return std::vector<Complex>(r.data(), r.data() + r.size());
}

std::vector<Complex> apply_node(const Scaled& s, std::span<const Complex> x) {
  auto out = apply_coords(*s.inner, x);
  for (auto& c : out) c *= s.alpha;
  return out;
}

std::vector<Complex> apply_node(const Power& p, std::span<const Complex> x) {
  std::vector<Complex> cur(x.begin(), x.end());
  for (int k = 0; k < p.exponent; ++k) cur = apply_coords(*p.base, cur);
  return cur;
}

std::vector<Complex> apply_node(const DirectSum& s, std::span<const Complex> x) {
  std::vector<Complex> out;
  out.reserve(x.size());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < s.parts.size(); ++i) {
    const bool last = i + 1 == s.parts.size();
    auto d = s.parts[i]->finite_dim();
    std::size_t len = d ? *d : x.size() - std::min(offset, x.size());
    if (offset + len > x.size() || (last && offset + len != x.size())) {
      throw ValidationError("direct sum dimension mismatch");
    }
    auto piece = apply_coords(*s.parts[i], x.subspan(offset, len));
    out.insert(out.end(), piece.begin(), piece.end());
    offset += len;
  }
  return out;
}

std::vector<Complex> apply_coords(const Operator& op, std::span<const Complex> x) {
  return std::visit([&](const auto& node) { return apply_node(node, x); }, op.node());
}

}  // namespace

Vector apply(const Operator& op, const Vector& x) {
  return Vector(apply_coords(op, x.coords()), x.space_id());
}

std::vector<Vector> orbit(const Operator& op, const Vector& x, std::size_t count) {
  std::vector<Vector> out;
  out.reserve(count);
  if (count == 0) return out;
  out.push_back(x);
  for (std::size_t i = 1; i < count; ++i) out.push_back(apply(op, out.back()));
  return out;
}

Matrix to_dense(const Operator& op) {
  return std::visit(
      Overloaded{
          [](const BackwardShift&) -> Matrix {
            throw ValidationError("shift operators have no finite matrix");
          },
          [](const ForwardShift&) -> Matrix {
            throw ValidationError("shift operators have no finite matrix");
          },
          [](const Diagonal& d) -> Matrix {
            auto len = d.eigenvalues.length();
            if (!len) throw ValidationError("generated diagonal is infinite dimensional");
            Matrix m = Matrix::Zero(static_cast<Eigen::Index>(*len), static_cast<Eigen::Index>(*len));
            for (std::size_t i = 0; i < *len; ++i) {
              m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d.eigenvalues.at(i + 1);
            }
            return m;
          },
          [](const DenseMatrix& m) -> Matrix { return m.entries; },
          [](const Scaled& s) -> Matrix { return s.alpha * to_dense(*s.inner); },
          [](const Power& p) -> Matrix {
            Matrix b = to_dense(*p.base);
            Matrix r = b;
            for (int k = 1; k < p.exponent; ++k) r = r * b;
            return r;
          },
          [](const DirectSum& s) -> Matrix {
            std::vector<Matrix> blocks;
            Eigen::Index total = 0;
            for (const auto& part : s.parts) {
              blocks.push_back(to_dense(*part));
              total += blocks.back().rows();
            }
            Matrix m = Matrix::Zero(total, total);
            Eigen::Index off = 0;
            for (const auto& b : blocks) {
              m.block(off, off, b.rows(), b.cols()) = b;
              off += b.rows();
            }
            return m;
          },
      },
      op.node());
}

// ---------------------------------------------------------------- norms

double largest_singular_value(const Matrix& m, double rel_tol) {
  const Matrix h = m.adjoint() * m;
  Eigen::Index best = 0;
  double best_norm = -1.0;
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    const double c = h.col(j).norm();
    if (c > best_norm) {
      best_norm = c;
      best = j;
    }
  }
  if (best_norm <= 0.0) return 0.0;

  ColumnVector v = h.col(best) / best_norm;
  double rho = (v.adjoint() * h * v)(0).real();
  constexpr int kMaxIter = 200000;
  for (int it = 0; it < kMaxIter; ++it) {
    ColumnVector w = h * v;
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    const double next = (v.adjoint() * h * v)(0).real();
    if (std::abs(next - rho) <= 1e-2 * rel_tol * std::abs(next)) return std::sqrt(std::max(next, 0.0));
    rho = next;
  }
  throw NonConvergence("power iteration for the operator norm did not converge");
}

namespace {

// sup_k prod_{i=k+1}^{k+n} |w_i|^{sign}, k = 1..window.
double shift_power_norm(const SequenceRule& w, int n, std::size_t window, double sign) {
  if (w.kind() == SequenceRule::Kind::constant) {
    return std::pow(std::abs(w.first()), sign * n);
  }
  std::size_t kmax = window;
  if (auto len = w.length()) {
    if (*len <= static_cast<std::size_t>(n)) {
      throw ValidationError("weight list too short for this power");
    }
    kmax = std::min(kmax, *len - static_cast<std::size_t>(n));
  }
  // Direct products keep the value exact; log sums are the fallback when a
  // product leaves the double range.
  double best = 0.0;
  bool in_range = true;
  for (std::size_t k = 1; k <= kmax && in_range; ++k) {
    double prod = 1.0;
    for (std::size_t i = k + 1; i <= k + static_cast<std::size_t>(n); ++i) prod *= std::abs(w.at(i));
    if (sign < 0) prod = 1.0 / prod;
    in_range = std::isfinite(prod) && prod > 0.0;
    best = std::max(best, prod);
  }
  if (in_range) return best;
  double log_best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= kmax; ++k) {
    double acc = 0.0;
    for (std::size_t i = k + 1; i <= k + static_cast<std::size_t>(n); ++i) acc += std::log(std::abs(w.at(i)));
    log_best = std::max(log_best, sign * acc);
  }
  return std::exp(log_best);
}

double power_norm_impl(const Operator& op, int n, const SpaceSpec& s, std::size_t window) {
  return std::visit(
      Overloaded{
          [&](const BackwardShift& b) { return shift_power_norm(b.weights, n, window, 1.0); },
          [&](const ForwardShift& f) { return shift_power_norm(f.weights, n, window, -1.0); },
          [&](const Diagonal& d) {
            const double sup = d.eigenvalues.tail_sup(0);
            if (std::isinf(sup)) throw ValidationError("unbounded diagonal operator");
            return std::pow(sup, n);
          },
          [&](const DenseMatrix& m) {
            Matrix p = m.entries;
            for (int k = 1; k < n; ++k) p = p * m.entries;
            if (s.p() == 2.0) return largest_singular_value(p);
            if (s.p() == 1.0) return p.cwiseAbs().colwise().sum().maxCoeff();
            if (std::isinf(s.p())) return p.cwiseAbs().rowwise().sum().maxCoeff();
            throw ValidationError("dense operator norms are available for p in {1, 2, inf}");
          },
          [&](const Scaled& sc) {
            return std::pow(std::abs(sc.alpha), n) * power_norm_impl(*sc.inner, n, s, window);
          },
          [&](const Power& p) { return power_norm_impl(*p.base, n * p.exponent, s, window); },
          [&](const DirectSum& sum) {
            double m = 0.0;
            for (const auto& part : sum.parts) m = std::max(m, power_norm_impl(*part, n, s, window));
            return m;
          },
      },
      op.node());
}

}  // namespace

double power_norm(const Operator& op, int n, const SpaceSpec& s, std::size_t window) {
  if (n < 1) throw ValidationError("power_norm needs n >= 1");
  if (s.kind() != SpaceSpec::Kind::lp) {
    throw ValidationError("operator norms are computed on lp spaces only");
  }
  return power_norm_impl(op, n, s, window);
}

std::optional<double> closed_form_radius(const Operator& op) {
  return std::visit(
      Overloaded{
          [](const BackwardShift& b) -> std::optional<double> {
            if (b.weights.kind() == SequenceRule::Kind::constant) return std::abs(b.weights.first());
            return std::nullopt;
          },
          [](const ForwardShift& f) -> std::optional<double> {
            if (f.weights.kind() == SequenceRule::Kind::constant) {
              return 1.0 / std::abs(f.weights.first());
            }
            return std::nullopt;
          },
          [](const Diagonal& d) -> std::optional<double> {
            const double sup = d.eigenvalues.tail_sup(0);
            if (std::isinf(sup)) return std::nullopt;
            return sup;
          },
          [](const DenseMatrix& m) -> std::optional<double> {
            Eigen::ComplexEigenSolver<Matrix> es(m.entries, false);
            if (es.info() != Eigen::Success) return std::nullopt;
            return es.eigenvalues().cwiseAbs().maxCoeff();
          },
          [](const Scaled& s) -> std::optional<double> {
            auto r = closed_form_radius(*s.inner);
            if (!r) return std::nullopt;
            return std::abs(s.alpha) * *r;
          },
          [](const Power& p) -> std::optional<double> {
            auto r = closed_form_radius(*p.base);
            if (!r) return std::nullopt;
            return std::pow(*r, p.exponent);
          },
          [](const DirectSum& s) -> std::optional<double> {
            double m = 0.0;
            for (const auto& part : s.parts) {
              auto r = closed_form_radius(*part);
              if (!r) return std::nullopt;
              m = std::max(m, *r);
            }
            return m;
          },
      },
      op.node());
}

SpectralRadiusEstimate spectral_radius(const Operator& op, int n_max, double tol,
                                       const SpaceSpec& s) {
  if (n_max < 8) throw ValidationError("spectral_radius needs n_max >= 8");
  SpectralRadiusEstimate est;
  est.root_norms.reserve(static_cast<std::size_t>(n_max));
  est.upper_bound = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    const double root = std::pow(power_norm(op, n, s), 1.0 / n);
    est.root_norms.push_back(root);
    if (root < est.upper_bound) {
      est.upper_bound = root;
      est.argmin = n;
    }
  }
  est.closed_form = closed_form_radius(op);
  if (est.closed_form) est.consistent = *est.closed_form <= est.upper_bound + tol;
  return est;
}

ContractionPower contraction_power(const Operator& op, int n_max, const SpaceSpec& s) {
  ContractionPower out;
  for (int n = 1; n <= n_max; ++n) {
    out.last_norm = power_norm(op, n, s);
    if (out.last_norm < 1.0) {
      out.n = n;
      out.status = ContractionPower::Status::found;
      return out;
    }
  }
  if (auto r = closed_form_radius(op)) {
    out.status = *r < 1.0 ? ContractionPower::Status::increase_n_max
                          : ContractionPower::Status::not_contracting;
  }
  return out;
}

Vector rolewicz_eigenvector(Complex alpha, Complex lambda, std::size_t dim) {
  if (dim == 0) throw ValidationError("eigenvector truncation must be >= 1");
  if (!(std::abs(lambda) < std::abs(alpha))) {
    throw ValidationError("|lambda| >= |alpha|: the eigenvector is not in lp");
  }
  const Complex q = lambda / alpha;
  std::vector<Complex> c(dim);
  Complex cur = q;
  for (std::size_t n = 0; n < dim; ++n) {
    c[n] = cur;
    cur *= q;
  }
  return Vector(std::move(c));
}

}  // namespace entrolab
