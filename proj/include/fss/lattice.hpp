#pragma once

#include <gmpxx.h>
#include <vector>

namespace fss {

using IntVec = std::vector<mpz_class>;

// Integer lattice given by generators; membership is decided exactly via a
// row Hermite normal form, so it does not depend on the generator
// presentation.
struct IntLattice {
  int ambient = 0;
  std::vector<IntVec> hnf;     // echelon rows, pivot columns strictly increasing
  std::vector<int> pivot_col;  // pivot column of each hnf row

  static IntLattice from_generators(int ambient, const std::vector<IntVec>& gens);

  int rank() const { return static_cast<int>(hnf.size()); }
  bool contains(const IntVec& v) const;
};

}  // namespace fss
