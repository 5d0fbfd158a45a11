#pragma once

// Truncated sequence-space vectors and the metrics used throughout the
// library. A Vector stands for the infinite sequence x = sum x_n e_n whose
// coordinates past dim() are exactly zero. Coordinates are indexed from 1.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace entrolab {

using Complex = std::complex<double>;

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::vector<Complex> coords, std::string space_id = {});
  static Vector zeros(std::size_t dim, std::string space_id = {});
  static Vector basis(std::size_t n, std::size_t dim, std::string space_id = {});
  static Vector real(const std::vector<double>& coords, std::string space_id = {});

  std::size_t dim() const { return coords_.size(); }
  const std::string& space_id() const { return space_id_; }

  // 1-based; coordinates beyond dim() read as zero.
  Complex coord(std::size_t n) const {
    return (n >= 1 && n <= coords_.size()) ? coords_[n - 1] : Complex{};
  }
  std::span<const Complex> coords() const { return coords_; }

  bool is_zero() const;
  Vector resized(std::size_t dim) const;
  Vector with_space(std::string space_id) const;

  friend bool operator==(const Vector& a, const Vector& b);
  friend Vector operator+(const Vector& a, const Vector& b);
  friend Vector operator-(const Vector& a, const Vector& b);
  friend Vector operator*(Complex alpha, const Vector& v);

 private:
  std::vector<Complex> coords_;
  std::string space_id_;
};

// Lexicographic order on (Re x_1, Im x_1, Re x_2, ...), zero padded.
bool lex_less(const Vector& a, const Vector& b);

class SpaceSpec {
 public:
  enum class Kind { lp, faggregate };

  // p may be +infinity for the sup norm.
  static SpaceSpec lp(double p, std::string label = {});
  // ||x|| = sum_i 2^{-i} min{1, ||pi_i x||_base}; base must be an lp space.
  static SpaceSpec faggregate(const SpaceSpec& base, std::string label = {});

  Kind kind() const { return kind_; }
  // Exponent of the lp norm, or of the base norm for faggregate.
  double p() const { return p_; }
  const SpaceSpec& base() const;
  const std::string& label() const { return label_; }
  std::string describe() const;

 private:
  SpaceSpec() = default;
  Kind kind_ = Kind::lp;
  double p_ = 2.0;
  std::shared_ptr<const SpaceSpec> base_;
  std::string label_;
};

// Value of a truncated norm plus a bound on everything the truncation
// dropped: the true norm of the infinite sequence lies in
// [value, value + tail_bound].
struct TruncatedNorm {
  double value = 0.0;
  double tail_bound = 0.0;
};

double norm(const Vector& v, const SpaceSpec& s);
TruncatedNorm norm_with_tail(const Vector& v, const SpaceSpec& s);

double distance(const Vector& x, const Vector& y, const SpaceSpec& s);
// Same comparison as distance(x, y, s) > eps, with early exit.
bool distance_exceeds(const Vector& x, const Vector& y, const SpaceSpec& s, double eps);

// pi_i: keeps coordinates 1..i.
Vector project(const Vector& v, std::size_t i);

namespace detail {

// Norm of a - b for coordinate arrays (shorter one zero padded). These are
// the single implementation behind norm() and distance(), shared with the
// orbit caches in the entropy module so every comparison is bit-identical.
double lp_norm_diff(std::span<const Complex> a, std::span<const Complex> b, double p);
double faggregate_norm_diff(std::span<const Complex> a, std::span<const Complex> b, double p);
bool faggregate_diff_exceeds(std::span<const Complex> a, std::span<const Complex> b, double p,
                             double eps);
double norm_diff(std::span<const Complex> a, std::span<const Complex> b, const SpaceSpec& s);
bool diff_exceeds(std::span<const Complex> a, std::span<const Complex> b, const SpaceSpec& s,
                  double eps);

}  // namespace detail
}  // namespace entrolab
