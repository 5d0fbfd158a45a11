#pragma once

// Full shifts on N symbols and their embedding into weighted backward shift
// dynamics via x -> sum_n (prod_{i<=n} w_i^{-1}) x_n e_n.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "entrolab/entropy.hpp"
#include "entrolab/operators.hpp"

namespace entrolab {

struct SymbolSequence {
  std::vector<int> symbols;  // finite prefix, read as padded with 0
  int alphabet = 2;

  // symbols nonempty, alphabet >= 1, every symbol in [0, alphabet).
  void validate() const;
};

// Coordinates 1..M of the embedding. Throws on inadmissible weights, M < 1 or
// M > length.
Vector phi_N(const SymbolSequence& x, const SequenceRule& w, std::size_t m, double p = 2.0);

// Drops the first symbol. Length must be >= 2.
SymbolSequence bernoulli_shift(const SymbolSequence& x);

struct ConjugacyReport {
  std::size_t samples = 0;
  std::size_t length = 0;
  double max_deviation = 0.0;
  bool passed = false;
};

// Compares B_w(phi(x)) with phi(shift(x)) on coordinates 1..M-1 for seeded
// random sequences of length M.
ConjugacyReport verify_conjugacy(const SequenceRule& w, int alphabet, std::size_t samples,
                                 std::size_t m, double tol, std::uint64_t seed, double p = 2.0);

inline constexpr double kExhaustiveCubeLimit = 1e5;

// Images of length-`depth` words. Exhaustive when alphabet^depth <= 1e5,
// otherwise `count` distinct seeded random words. The resolution is the
// Euclidean norm of the largest possible tail
// sum_{n>depth} (N-1) prod_{i<=n} w_i^{-1} e_n; `p` only sets the space for
// the admissibility test. Random mode claims resolution 0 (unknown).
CompactSample cube_sample(int alphabet, std::size_t depth, const SequenceRule& w, std::size_t count,
                          std::uint64_t seed, double p = 2.0);

// Norm in lp of sum_{n>depth} c * prod_{i<=n} |w_i|^{-1} e_n, bounded with a
// geometric remainder past a finite window.
double embedding_tail(const SequenceRule& w, std::size_t depth, double c, double p);

}  // namespace entrolab
