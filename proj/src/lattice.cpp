#include "fss/lattice.hpp"

#include <algorithm>

#include "fss/scalar.hpp"

namespace fss {

namespace {

// In-place row HNF by column, using extended gcd row combinations.
void hermite_reduce(std::vector<IntVec>& rows, int ambient,
                    std::vector<int>& pivots) {
  int lead = 0;
  for (int col = 0; col < ambient && lead < static_cast<int>(rows.size()); ++col) {
    // Combine all rows with a nonzero entry in this column into one pivot row.
    int piv = -1;
    for (int r = lead; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[lead], rows[piv]);
    for (int r = lead + 1; r < static_cast<int>(rows.size()); ++r) {
      while (rows[r][col] != 0) {
        mpz_class q = rows[lead][col] / rows[r][col];  // truncated division
        for (int c = col; c < ambient; ++c) rows[lead][c] -= q * rows[r][c];
        std::swap(rows[lead], rows[r]);
      }
    }
    if (rows[lead][col] < 0)
      for (int c = col; c < ambient; ++c) rows[lead][c] = -rows[lead][c];
    // Reduce entries above the pivot into [0, pivot).
    for (int r = 0; r < lead; ++r) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[lead][col].get_mpz_t());
      if (q != 0)
        for (int c = col; c < ambient; ++c) rows[r][c] -= q * rows[lead][c];
    }
    pivots.push_back(col);
    ++lead;
  }
  rows.resize(pivots.size());
}

}  // namespace

IntLattice IntLattice::from_generators(int ambient, const std::vector<IntVec>& gens) {
  IntLattice lat;
  lat.ambient = ambient;
  std::vector<IntVec> rows;
  for (const auto& g : gens) {
    ensure(static_cast<int>(g.size()) == ambient, "lattice generator size mismatch");
    rows.push_back(g);
  }
  hermite_reduce(rows, ambient, lat.pivot_col);
  lat.hnf = std::move(rows);
  return lat;
}

bool IntLattice::contains(const IntVec& v) const {
  require(static_cast<int>(v.size()) == ambient, "lattice membership: dimension mismatch");
  IntVec w = v;
  for (size_t r = 0; r < hnf.size(); ++r) {
    int col = pivot_col[r];
    if (w[col] == 0) continue;
    if (w[col] % hnf[r][col] != 0) return false;
    mpz_class q = w[col] / hnf[r][col];
    for (int c = col; c < ambient; ++c) w[c] -= q * hnf[r][c];
  }
  for (const auto& x : w)
    if (x != 0) return false;
  return true;
}

}  // namespace fss
