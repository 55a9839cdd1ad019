#pragma once

// Brute-force lattice oracles shared by the unit and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "wmset/lattice.hpp"

namespace wmset::testing {

using Mat = std::vector<std::vector<std::int64_t>>;  // row-major, small

inline std::int64_t det(const Mat& m) {
  if (m.size() == 1) return m[0][0];
  if (m.size() == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline Mat adjugate(const Mat& m) {
  const std::size_t d = m.size();
  Mat adj(d, std::vector<std::int64_t>(d));
  if (d == 1) {
    adj[0][0] = 1;
    return adj;
  }
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      Mat minor;
      for (std::size_t i = 0; i < d; ++i) {
        if (i == c) continue;
        std::vector<std::int64_t> row;
        for (std::size_t j = 0; j < d; ++j)
          if (j != r) row.push_back(m[i][j]);
        minor.push_back(row);
      }
      adj[r][c] = ((r + c) % 2 ? -1 : 1) * det(minor);
    }
  return adj;
}

// x is in the lattice spanned by the columns of m iff adj(m) x == 0 mod det(m).
struct Oracle {
  Mat adj;
  std::int64_t d;
  explicit Oracle(const Mat& m) : adj(adjugate(m)), d(det(m)) {}
  bool contains(const std::vector<std::int64_t>& x) const {
    for (const auto& row : adj) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < x.size(); ++j) s += row[j] * x[j];
      if (s % d != 0) return false;
    }
    return true;
  }
};

inline Mat random_basis(std::mt19937_64& rng, std::size_t d, std::int64_t max_det) {
  Mat m(d, std::vector<std::int64_t>(d, 0));
  std::int64_t budget = max_det;
  for (std::size_t i = 0; i < d; ++i) {
    std::uniform_int_distribution<std::int64_t> diag(1, std::max<std::int64_t>(1, i + 1 == d ? budget : 5));
    m[i][i] = std::min(diag(rng), budget);
    budget /= m[i][i];
    for (std::size_t j = 0; j < i; ++j) m[i][j] = std::uniform_int_distribution<std::int64_t>(-6, 6)(rng);
  }
  // scramble with unimodular column operations
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  std::uniform_int_distribution<std::int64_t> mult(-2, 2);
  for (int step = 0; step < 6 && d > 1; ++step) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    const std::int64_t k = mult(rng);
    for (std::size_t r = 0; r < d; ++r) m[r][a] += k * m[r][b];
  }
  return m;
}

inline CanonicalLattice to_lattice(const Mat& m) {
  std::vector<IntVec> cols(m.size(), IntVec(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m.size(); ++c) cols[c][r] = m[r][c];
  return canonicalize(LatticeBasis::from_columns(cols));
}

template <class Fn>
void for_each_in_box(std::size_t d, std::int64_t r, Fn&& fn) {
  std::vector<std::int64_t> x(d, -r);
  while (true) {
    fn(x);
    std::size_t i = 0;
    while (i < d && x[i] == r) x[i++] = -r;
    if (i == d) return;
    ++x[i];
  }
}

inline IntVec big(const std::vector<std::int64_t>& x) { return IntVec(x.begin(), x.end()); }

}  // namespace wmset::testing
