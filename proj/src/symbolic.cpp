#include "entrolab/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "entrolab/errors.hpp"
#include "entrolab/specification.hpp"

namespace entrolab {

void SymbolSequence::validate() const {
  if (alphabet < 1) throw ValidationError("alphabet size must be >= 1");
  if (symbols.empty()) throw ValidationError("symbol sequence is empty");
  for (int s : symbols) {
    if (s < 0 || s >= alphabet) {
      throw ValidationError("symbol " + std::to_string(s) + " outside {0.." + std::to_string(alphabet - 1) + "}");
    }
  }
}

namespace {

void require_admissible(const SequenceRule& w, double p) {
  const Admissibility adm = check_admissible(w, p);
  if (!adm.admissible) throw ValidationError("inadmissible weights " + w.describe() + ": " + adm.note);
}

Vector embed(const std::vector<int>& symbols, const SequenceRule& w, std::size_t m) {
  std::vector<Complex> c(m);
  Complex scale = 1.0;
  for (std::size_t n = 1; n <= m; ++n) {
    scale /= w.at(n);
    c[n - 1] = static_cast<double>(symbols[n - 1]) * scale;
  }
  return Vector(std::move(c));
}

}  // namespace

Vector phi_N(const SymbolSequence& x, const SequenceRule& w, std::size_t m, double p) {
  x.validate();
  if (m < 1 || m > x.symbols.size()) throw ValidationError("phi_N needs 1 <= M <= length");
  require_admissible(w, p);
  return embed(x.symbols, w, m);
}

SymbolSequence bernoulli_shift(const SymbolSequence& x) {
  x.validate();
  if (x.symbols.size() < 2) throw ValidationError("cannot shift a sequence of length 1");
  return {std::vector<int>(x.symbols.begin() + 1, x.symbols.end()), x.alphabet};
}

ConjugacyReport verify_conjugacy(const SequenceRule& w, int alphabet, std::size_t samples,
                                 std::size_t m, double tol, std::uint64_t seed, double p) {
  if (alphabet < 1) throw ValidationError("alphabet size must be >= 1");
  if (m < 2) throw ValidationError("conjugacy check needs M >= 2");
  require_admissible(w, p);
  const Operator shift = Operator::backward_shift(w);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, alphabet - 1);
  ConjugacyReport rep;
  rep.samples = samples;
  rep.length = m;
  SymbolSequence x{std::vector<int>(m), alphabet};
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& v : x.symbols) v = pick(rng);
    const Vector lhs = apply(shift, embed(x.symbols, w, m));
    const Vector rhs = embed(bernoulli_shift(x).symbols, w, m - 1);
    for (std::size_t n = 1; n < m; ++n) {
      rep.max_deviation = std::max(rep.max_deviation, std::abs(lhs.coord(n) - rhs.coord(n)));
    }
  }
  rep.passed = rep.max_deviation <= tol;
  return rep;
}

double embedding_tail(const SequenceRule& w, std::size_t depth, double c, double p) {
  const Admissibility adm = check_admissible(w, p);
  if (!adm.admissible) throw ValidationError("inadmissible weights " + w.describe());
  if (c == 0.0) return 0.0;
  std::size_t end = depth + kAdmissibilityWindow;
  if (auto len = w.length()) end = std::min(end, *len);
  double log_t = 0.0;
  for (std::size_t n = 1; n <= depth; ++n) log_t -= std::log(std::abs(w.at(n)));
  const double rho = adm.ratio_bound;
  if (std::isinf(p)) {
    double best = 0.0;
    for (std::size_t n = depth + 1; n <= end; ++n) {
      log_t -= std::log(std::abs(w.at(n)));
      best = std::max(best, std::exp(log_t));
    }
    return c * std::max(best, std::exp(log_t) * rho);
  }
  double sum = 0.0;
  for (std::size_t n = depth + 1; n <= end; ++n) {
    log_t -= std::log(std::abs(w.at(n)));
    sum += std::exp(p * log_t);
  }
  const double rp = std::pow(rho, p);
  sum += std::exp(p * log_t) * rp / (1.0 - rp);
  return c * std::pow(sum, 1.0 / p);
}

CompactSample cube_sample(int alphabet, std::size_t depth, const SequenceRule& w, std::size_t count,
                          std::uint64_t seed, double p) {
  if (alphabet < 1) throw ValidationError("alphabet size must be >= 1");
  if (depth < 1) throw ValidationError("cube depth must be >= 1");
  require_admissible(w, p);
  const double total = std::pow(static_cast<double>(alphabet), static_cast<double>(depth));
  std::vector<Vector> pts;
  std::vector<int> word(depth, 0);
  if (total <= kExhaustiveCubeLimit) {
    const auto n = static_cast<std::size_t>(total);
    pts.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
      pts.push_back(embed(word, w, depth));
      for (std::size_t i = depth; i-- > 0;) {
        if (++word[i] < alphabet) break;
        word[i] = 0;
      }
    }
  } else {
    if (count < 1 || static_cast<double>(count) > total) {
      throw ValidationError("random cube mode needs 1 <= count <= N^depth");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, alphabet - 1);
    std::set<std::vector<int>> seen;
    while (seen.size() < count) {
      for (auto& v : word) v = pick(rng);
      if (seen.insert(word).second) pts.push_back(embed(word, w, depth));
    }
  }
  // A random subset is not a net of the cube, so it claims no resolution.
  const double res = total <= kExhaustiveCubeLimit ? embedding_tail(w, depth, static_cast<double>(alphabet - 1), 2.0)
                                                   : 0.0;
  return CompactSample::make(std::move(pts), res,
                             "cube(N=" + std::to_string(alphabet) + ",depth=" + std::to_string(depth) + ")");
}

}  // namespace entrolab
