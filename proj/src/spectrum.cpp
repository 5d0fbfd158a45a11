#include "entrolab/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "entrolab/errors.hpp"

namespace entrolab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Eigenvalue closed(Complex v) {
  Eigenvalue e;
  e.value = v;
  e.log_modulus = std::log(std::abs(v));
  return e;
}

void finish(SpectralData& sd) {
  double r = sd.tail_sup;
  for (const auto& e : sd.eigenvalues) r = std::max(r, std::abs(e.value));
  if (sd.region) r = std::max(r, sd.region->radius);
  sd.spectral_radius = r;
}

SpectralData diagonal_spectrum(const Diagonal& d) {
  const SequenceRule& rule = d.eigenvalues;
  SpectralData sd;
  sd.provenance = Provenance::closed_form;
  if (rule.kind() == SequenceRule::Kind::list) {
    for (Complex v : rule.values()) {
      auto it = std::find_if(sd.eigenvalues.begin(), sd.eigenvalues.end(),
                             [v](const Eigenvalue& e) { return e.value == v; });
      if (it != sd.eigenvalues.end()) {
        ++it->multiplicity;
      } else {
        sd.eigenvalues.push_back(closed(v));
      }
    }
    sd.complete = true;
    finish(sd);
    return sd;
  }

  const double sup = rule.tail_sup(0);
  if (std::isinf(sup)) throw ValidationError("unbounded diagonal operator has no bounded spectrum");
  sd.complete = false;
  if (rule.kind() == SequenceRule::Kind::constant) {
    sd.eigenvalues.push_back(closed(rule.first()));
    sd.tail_sup = sup;
    finish(sd);
    return sd;
  }
  // Decaying rules: list every eigenvalue outside the unit disc plus a fixed
  // prefix; the rest is bounded by tail_sup. Non-decaying rules (geometric
  // with |ratio| = 1) just get the prefix.
  const bool decays = rule.decays_to_zero();
  std::size_t n = 1;
  while (n <= kListedPrefix || (decays && std::abs(rule.at(n)) > 1.0)) {
    sd.eigenvalues.push_back(closed(rule.at(n)));
    ++n;
  }
  sd.tail_sup = rule.tail_sup(n - 1);
  sd.zero_accumulation = decays;
  finish(sd);
  return sd;
}

SpectralData dense_spectrum(const Matrix& a) {
  Eigen::ComplexEigenSolver<Matrix> es(a, true);
  if (es.info() != Eigen::Success) throw NonConvergence("dense eigen solve did not converge");
  const Eigen::Index d = a.rows();
  SpectralData sd;
  sd.provenance = Provenance::numeric;
  sd.complete = true;
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigenvalue e;
    e.value = es.eigenvalues()(i);
    e.log_modulus = std::log(std::abs(e.value));
    const Matrix shifted = a - e.value * Matrix::Identity(d, d);
    if (d <= 6) {
      e.residual = std::abs(shifted.partialPivLu().determinant());
    } else {
      ColumnVector v = es.eigenvectors().col(i);
      v /= v.norm();
      e.residual = (shifted * v).norm();
    }
    sd.residual_tol = std::max(sd.residual_tol, e.residual);
    sd.eigenvalues.push_back(e);
  }
  finish(sd);
  return sd;
}

Complex int_power(Complex z, int m) {
  Complex r = 1.0;
  for (int k = 0; k < m; ++k) r *= z;
  return r;
}

}  // namespace

SpectralData spectrum(const Operator& op) {
  return std::visit(
      Overloaded{
          [](const BackwardShift& b) -> SpectralData {
            if (b.weights.kind() != SequenceRule::Kind::constant) {
              throw ValidationError("no closed-form spectrum for " + b.weights.describe() +
                                    " shift weights");
            }
            const double r = std::abs(b.weights.first());
            SpectralData sd;
            sd.complete = false;
            sd.tail_sup = r;
            sd.region = SpectralRegion{
                r,
                "open disc of eigenvalues with eigenvectors ((l/a)^n)_n; the boundary circle "
                "belongs to the spectrum but carries no eigenvalue since (l/a)^n is not "
                "p-summable when |l| = |a|"};
            finish(sd);
            return sd;
          },
          [](const ForwardShift&) -> SpectralData {
            throw ValidationError("no closed-form point spectrum for forward shifts");
          },
          [](const Diagonal& d) { return diagonal_spectrum(d); },
          [](const DenseMatrix& m) { return dense_spectrum(m.entries); },
          [](const Scaled& s) {
            SpectralData sd = spectrum(*s.inner);
            const double la = std::log(std::abs(s.alpha));
            for (auto& e : sd.eigenvalues) {
              e.value *= s.alpha;
              e.log_modulus += la;
            }
            sd.tail_sup *= std::abs(s.alpha);
            if (sd.region) sd.region->radius *= std::abs(s.alpha);
            finish(sd);
            return sd;
          },
          [](const Power& p) {
            SpectralData sd = spectrum(*p.base);
            for (auto& e : sd.eigenvalues) {
              e.value = int_power(e.value, p.exponent);
              e.log_modulus *= p.exponent;
            }
            sd.tail_sup = std::pow(sd.tail_sup, p.exponent);
            if (sd.region) sd.region->radius = std::pow(sd.region->radius, p.exponent);
            finish(sd);
            return sd;
          },
          [](const DirectSum& s) {
            SpectralData out;
            out.complete = true;
            for (const auto& part : s.parts) {
              SpectralData sd = spectrum(*part);
              out.eigenvalues.insert(out.eigenvalues.end(), sd.eigenvalues.begin(),
                                     sd.eigenvalues.end());
              if (sd.provenance == Provenance::numeric) out.provenance = Provenance::numeric;
              out.residual_tol = std::max(out.residual_tol, sd.residual_tol);
              out.complete = out.complete && sd.complete;
              out.tail_sup = std::max(out.tail_sup, sd.tail_sup);
              out.zero_accumulation = out.zero_accumulation || sd.zero_accumulation;
              if (sd.region) {
                if (out.region) throw ValidationError("direct sum with two spectral regions");
                out.region = sd.region;
              }
            }
            finish(out);
            return out;
          },
      },
      op.node());
}

bool same_eigenvalues(const std::vector<Eigenvalue>& a, const std::vector<Eigenvalue>& b,
                      double tol) {
  auto expand = [](const std::vector<Eigenvalue>& v) {
    std::vector<Complex> out;
    for (const auto& e : v) out.insert(out.end(), static_cast<std::size_t>(e.multiplicity), e.value);
    return out;
  };
  std::vector<Complex> xs = expand(a);
  std::vector<Complex> ys = expand(b);
  if (xs.size() != ys.size()) return false;
  std::vector<bool> used(ys.size(), false);
  for (Complex x : xs) {
    std::size_t best = ys.size();
    double best_d = tol;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(x - ys[j]);
      if (dist <= best_d) {
        best_d = dist;
        best = j;
      }
    }
    if (best == ys.size()) return false;
    used[best] = true;
  }
  return true;
}

double mini_norm(const Operator& op) {
  const Matrix a = to_dense(op);
  Eigen::JacobiSVD<Matrix> svd(a);
  const double smin = svd.singularValues().minCoeff();
  if (smin <= 1e-12) throw ValidationError("mini_norm of a singular matrix");
  return smin;
}

// ---------------------------------------------------------------- splitting

namespace {

enum class Part { unstable = 0, center = 1, stable = 2 };

Part classify(Complex l, double tol) {
  const double gap = std::abs(std::abs(l) - 1.0);
  if (gap <= tol / 2) return Part::center;
  if (gap > tol) return std::abs(l) > 1.0 ? Part::unstable : Part::stable;
  throw ValidationError("eigenvalue modulus inside the ambiguous annulus around the unit circle");
}

Matrix orthonormal_columns(const Matrix& cols) {
  if (cols.cols() == 0) return Matrix(cols.rows(), 0);
  Eigen::HouseholderQR<Matrix> qr(cols);
  return qr.householderQ() * Matrix::Identity(cols.rows(), cols.cols());
}

}  // namespace

Splitting::Components Splitting::components(const ColumnVector& x) const {
  const ColumnVector c = change_of_basis_inv * x;
  Components out;
  out.unstable = c.head(unstable.dim());
  out.center = c.segment(unstable.dim(), center.dim());
  out.stable = c.tail(stable.dim());
  return out;
}

Splitting riesz_split(const Operator& op, double circle_tol) {
  if (!(circle_tol > 0.0)) throw ValidationError("circle_tol must be positive");
  const Matrix a = to_dense(op);
  const Eigen::Index d = a.rows();
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw NonConvergence("dense eigen solve did not converge");
  const double scale = std::max(1.0, a.norm());

  std::vector<Complex> eig(es.eigenvalues().data(), es.eigenvalues().data() + d);
  std::vector<Part> part(eig.size());
  for (std::size_t i = 0; i < eig.size(); ++i) part[i] = classify(eig[i], circle_tol);

  // Single-linkage clusters of numerically coincident eigenvalues; a
  // defective eigenvalue of multiplicity k scatters by about eps^{1/k}.
  const double cluster_tol = 1e-5 * scale;
  std::vector<std::size_t> parent(eig.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < eig.size(); ++i) {
    for (std::size_t j = i + 1; j < eig.size(); ++j) {
      if (part[i] == part[j] && std::abs(eig[i] - eig[j]) <= cluster_tol) parent[find(i)] = find(j);
    }
  }

  Splitting out;
  std::array<std::vector<ColumnVector>, 3> columns;
  std::array<std::vector<Complex>, 3> values;
  std::vector<bool> done(eig.size(), false);
  for (std::size_t i = 0; i < eig.size(); ++i) {
    const std::size_t root = find(i);
    if (done[root]) continue;
    done[root] = true;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < eig.size(); ++j) {
      if (find(j) == root) members.push_back(j);
    }
    Complex mu{};
    for (auto j : members) mu += eig[j];
    mu /= static_cast<double>(members.size());
    const auto k = static_cast<Eigen::Index>(members.size());

    // Generalized eigenspace = null((A - mu I)^k), dimension k.
    const Matrix shifted = a - mu * Matrix::Identity(d, d);
    Matrix chain = shifted;
    for (Eigen::Index j = 1; j < k; ++j) chain = chain * shifted;
    Eigen::JacobiSVD<Matrix> svd(chain, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = std::max(sv(0), 1e-300);
    out.chain_residual = std::max(out.chain_residual, sv(d - k) / top);

    const auto p = static_cast<std::size_t>(part[root]);
    for (Eigen::Index j = d - k; j < d; ++j) columns[p].push_back(svd.matrixV().col(j));
    for (auto j : members) values[p].push_back(eig[j]);
  }

  std::array<Matrix, 3> bases;
  for (std::size_t p = 0; p < 3; ++p) {
    Matrix cols(d, static_cast<Eigen::Index>(columns[p].size()));
    for (std::size_t j = 0; j < columns[p].size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = columns[p][j];
    bases[p] = orthonormal_columns(cols);
  }

  Matrix pmat(d, d);
  pmat << bases[0], bases[1], bases[2];
  Eigen::FullPivLU<Matrix> lu(pmat);
  if (lu.rank() < d) throw NonConvergence("invariant subspaces do not span the space");
  const Matrix pinv = lu.inverse();
  const Matrix block = pinv * a * pmat;

  const std::array<Eigen::Index, 3> dims{bases[0].cols(), bases[1].cols(), bases[2].cols()};
  Matrix off = block;
  Eigen::Index offset = 0;
  std::array<InvariantBlock*, 3> targets{&out.unstable, &out.center, &out.stable};
  for (std::size_t p = 0; p < 3; ++p) {
    targets[p]->basis = bases[p];
    targets[p]->matrix = block.block(offset, offset, dims[p], dims[p]);
    targets[p]->eigenvalues = values[p];
    off.block(offset, offset, dims[p], dims[p]).setZero();
    offset += dims[p];
  }
  out.block_residual = off.norm();
  out.change_of_basis = pmat;
  out.change_of_basis_inv = pinv;
  if (out.block_residual > 1e-9 * scale) {
    throw NonConvergence("invariant splitting residual " + std::to_string(out.block_residual) +
                         " exceeds tolerance");
  }
  return out;
}

}  // namespace entrolab
