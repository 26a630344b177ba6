#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include <cstdint>
#include <vector>

#include "curalg/matrix.hpp"
#include "curalg/subspace.hpp"

namespace oracles {

/// dim F^r over a d-dimensional space, counted by enumerating all d^r words
/// and dividing the aperiodic ones by r (necklace count). Knows nothing about
/// Lyndon words or bracketings.
inline std::size_t necklace_count(int d, int r) {
  std::uint64_t total = 1;
  for (int i = 0; i < r; ++i) total *= d;
  std::size_t aperiodic = 0;
  std::vector<int> w(r);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (int i = r - 1; i >= 0; --i) {
      w[i] = static_cast<int>(c % d);
      c /= d;
    }
    bool has_proper_period = false;
    for (int p = 1; p < r && !has_proper_period; ++p) {
      if (r % p != 0) continue;
      bool periodic = true;
      for (int i = p; i < r && periodic; ++i) periodic = (w[i] == w[i - p]);
      has_proper_period = periodic;
    }
    if (!has_proper_period) ++aperiodic;
  }
  return aperiodic / r;
}

/// Witt formula (1/r) sum_{s|r} mu(s) d^{r/s}, as a second independent route.
inline long long witt_formula(int d, int r) {
  auto mobius = [](int n) {
    int m = 1;
    for (int p = 2; p * p <= n; ++p) {
      if (n % p) continue;
      n /= p;
      if (n % p == 0) return 0;
      m = -m;
    }
    if (n > 1) m = -m;
    return m;
  };
  long long sum = 0;
  for (int s = 1; s <= r; ++s) {
    if (r % s) continue;
    long long pw = 1;
    for (int i = 0; i < r / s; ++i) pw *= d;
    sum += mobius(s) * pw;
  }
  return sum / r;
}

/// Membership of a dense tensor vector in the row space of a dense matrix,
/// via plain rref on the stacked system (oracle for tensor_to_lyndon).
inline bool in_row_space(const curalg::MatrixQ& rows, const curalg::VecQ& v) {
  using namespace curalg;
  return rank(rows) == rank(MatrixQ::vstack(rows, MatrixQ::from_rows({v})));
}

}  // namespace oracles
