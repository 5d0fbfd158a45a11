#pragma once

// Symbolic operator descriptions with exact application on truncated
// sequence vectors, operator-power norms and spectral-radius estimates.

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "entrolab/spaces.hpp"

namespace entrolab {

using Matrix = Eigen::MatrixXcd;
using ColumnVector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxDenseDim = 32;

// A coefficient sequence r_1, r_2, ... given either as an explicit finite
// list or by a closed-form generator.
class SequenceRule {
 public:
  enum class Kind { list, constant, geometric, harmonic };

  static SequenceRule list(std::vector<Complex> values);
  static SequenceRule constant(Complex value);
  // r_n = first * ratio^{n-1}
  static SequenceRule geometric(Complex first, Complex ratio);
  // r_n = 1 / (n + 1)
  static SequenceRule harmonic();

  Kind kind() const { return kind_; }
  // 1-based. Throws past the end of an explicit list.
  Complex at(std::size_t n) const;
  std::optional<std::size_t> length() const;
  const std::vector<Complex>& values() const { return values_; }
  Complex first() const { return first_; }
  Complex ratio() const { return ratio_; }

  bool has_zero() const;
  // |r_n| -> 0, decided from the generator (lists are finite, hence "decay").
  bool decays_to_zero() const;
  // sup_{n > after} |r_n|; +inf when unbounded, 0 past the end of a list.
  double tail_sup(std::size_t after = 0) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  std::vector<Complex> values_;
  Complex first_{1.0};
  Complex ratio_{1.0};
};

class Operator;
using OperatorPtr = std::shared_ptr<const Operator>;

// (B_w x)_n = w_{n+1} x_{n+1}
struct BackwardShift {
  SequenceRule weights;
};
// (F_w x)_1 = 0, (F_w x)_{n+1} = x_n / w_{n+1}; B_w F_w = I.
struct ForwardShift {
  SequenceRule weights;
};
struct Diagonal {
  SequenceRule eigenvalues;
};
struct DenseMatrix {
  Matrix entries;
};
struct Scaled {
  Complex alpha;
  OperatorPtr inner;
};
// Block diagonal on consecutive coordinate ranges. Every part except the
// last must be finite dimensional.
struct DirectSum {
  std::vector<OperatorPtr> parts;
};
struct Power {
  OperatorPtr base;
  int exponent;
};

class Operator {
 public:
  using Node = std::variant<BackwardShift, ForwardShift, Diagonal, DenseMatrix, Scaled, DirectSum,
                            Power>;

  static Operator backward_shift(SequenceRule weights);
  static Operator forward_shift(SequenceRule weights);
  static Operator diagonal(SequenceRule eigenvalues);
  static Operator diagonal(std::vector<Complex> eigenvalues);
  static Operator dense(Matrix entries);
  static Operator scaled(Complex alpha, Operator inner);
  static Operator direct_sum(std::vector<Operator> parts);
  static Operator power(Operator base, int exponent);
  static Operator identity(std::size_t dim);
  // alpha * B with unit weights.
  static Operator rolewicz(Complex alpha);

  const Node& node() const { return node_; }
  // Dimension of a finite-dimensional operator, nullopt for sequence-space ones.
  std::optional<std::size_t> finite_dim() const;
  bool is_shift() const;
  std::string describe() const;

 private:
  explicit Operator(Node node) : node_(std::move(node)) {}
  Node node_;
};

Vector apply(const Operator& op, const Vector& x);
// x, T x, ..., T^{count-1} x
std::vector<Vector> orbit(const Operator& op, const Vector& x, std::size_t count);

// Matrix of a finite-dimensional operator.
Matrix to_dense(const Operator& op);

inline constexpr std::size_t kDefaultNormWindow = 256;

// ||T^n|| on the given space. Shifts and diagonals use exact closed forms
// (supremum over the first `window` indices for generated rules); dense
// blocks use power iteration for p = 2 and the column / row sum formulas for
// p = 1 / p = inf; other p are rejected for dense blocks.
double power_norm(const Operator& op, int n, const SpaceSpec& s,
                  std::size_t window = kDefaultNormWindow);

// Largest singular value of a dense matrix by power iteration on M^H M.
double largest_singular_value(const Matrix& m, double rel_tol = 1e-10);

struct SpectralRadiusEstimate {
  double upper_bound = 0.0;  // min_{n <= n_max} ||T^n||^{1/n}
  int argmin = 0;
  std::vector<double> root_norms;  // ||T^n||^{1/n}, n = 1..n_max
  std::optional<double> closed_form;
  // closed_form <= upper_bound + tol (vacuous without a closed form)
  bool consistent = true;
};

SpectralRadiusEstimate spectral_radius(const Operator& op, int n_max, double tol,
                                       const SpaceSpec& s = SpaceSpec::lp(2.0));

// r(T) when known in closed form: diagonal rules, constant-weight shifts,
// and compositions of these. Dense blocks use their eigenvalues.
std::optional<double> closed_form_radius(const Operator& op);

struct ContractionPower {
  enum class Status { found, increase_n_max, not_contracting, undetermined };
  std::optional<int> n;
  Status status = Status::undetermined;
  double last_norm = 0.0;
};

ContractionPower contraction_power(const Operator& op, int n_max,
                                   const SpaceSpec& s = SpaceSpec::lp(2.0));

// Eigenvector x_lambda = ((lambda/alpha)^n)_n of alpha*B, n = 1..dim.
Vector rolewicz_eigenvector(Complex alpha, Complex lambda, std::size_t dim);

}  // namespace entrolab
