#pragma once

#include <map>
#include <vector>

#include "fss/bicomplex.hpp"
#include "fss/hodge.hpp"
#include "fss/linalg.hpp"

namespace fss {

// One cell of one page. Representatives are vectors in Tot^{p+q} coordinates;
// classes are read modulo `den`.
struct PageCell {
  int dim = 0;
  std::vector<Vec> reps;
  Subspace zspace, den;
};

struct Page {
  int r = 0;
  std::map<CellKey, PageCell> cells;
  std::map<CellKey, Matrix> dr;  // d_r : (p,q) -> (p+r, q-r+1), keyed by source

  int dim(int p, int q) const;
  Matrix dr_at(int p, int q) const;
  int total_dim(int k) const;  // sum over p+q = k
};

struct PageStack {
  std::vector<Page> pages;  // r = 0 .. rmax
  int rmax = 0;
  int degeneracy = 1;
  int pmax = 0, qmax = 0;

  const Page& page(int r) const { return pages.at(r); }
  const Page& last() const { return pages.back(); }
};

// Page r, clamped to the last computed page (cells are stable beyond rmax).
const Page& page_clamped(const PageStack& s, int r);

// Column-filtration spectral sequence computed from the subspace formulas
//   Z_r^{p,q} = F^p Tot ∩ d^{-1} F^{p+r} Tot,
//   E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2}).
// Pages are computed for r = 0..pmax+1; beyond that every d_r vanishes for
// degree reasons.
PageStack pages_direct(const Bicomplex& b, bool parallel = false);

// Independent oracle: E_1 as column cohomology, then cohomology of
// cohomology, with d_r obtained by solving the zig-zag systems
//   del01 x_1 = -del10 x_0, ..., del01 x_r = -del10 x_{r-1}.
PageStack pages_iterative(const Bicomplex& b);

// min { r >= 1 : d_s = 0 for all s >= r }; cross-checked against dimension
// stabilization.
int degeneracy_step(const PageStack& s);

// sum_{p+q=k} dim E_inf^{p,q} == dim H^k(Tot) for every k.
bool frolicher_identity(const PageStack& s, const Cohomology& tot_cohomology);

// Euler characteristic of each page (invariant across r).
bool euler_page_invariance(const PageStack& s);

// Dimension agreement of two stacks, cell by cell on every page.
bool stacks_agree(const PageStack& a, const PageStack& b);

// Tensor-product verification: per-degree dims of H(Tot(a (x) b)) equal the
// convolution of the factors' cohomology dims. Returns the tensor complex.
struct KunnethCheck {
  Bicomplex product;
  bool ok = false;
};
KunnethCheck kunneth_verified(const Bicomplex& a, const Bicomplex& b);

// Maps induced on every page by a basis-compatible inclusion, with
// injectivity verdicts and PD verdicts of each total page algebra.
struct PageMapReport {
  std::vector<std::map<CellKey, Matrix>> maps;  // per r
  std::vector<bool> injective;                  // per r (all cells)
  std::vector<bool> sub_page_pd, amb_page_pd;   // per r
  bool all_injective = true;
  bool all_pd = true;
};
PageMapReport induced_page_maps(const Bicomplex& sub, const Bicomplex& amb);

// PD-type check of the total page algebra (Tot E_r, d_r) with the product
// induced by wedge on representatives.
bool page_pd_type(const Bicomplex& b, const TotComplex& t, const PageStack& s, int r);

}  // namespace fss
