#pragma once

#include <string>
#include <vector>

#include "fss/bicomplex.hpp"
#include "fss/linalg.hpp"

namespace fss {

struct PdReport {
  bool is_pd = false;
  int top_degree = 0;
  std::vector<std::pair<int, std::string>> failures;  // (degree, reason)
};

// Checks the Poincare-duality-type conditions of the totalized algebra:
// one-dimensional bottom A^0 = C.1 and top A^n, non-degenerate wedge pairing
// A^i x A^{n-i} -> A^n, and d A^{n-1} = 0, d A^0 = 0.
PdReport check_pd_type(const Bicomplex& b);

// The antilinear duality operator on a PD-type monomial complex, fixed by
// a ^ star(b) = h(a,b) v with the basis orthonormal for h and h(v,v) = 1.
// star(x) = S[deg] * conj(x).
struct StarOp {
  int n = 0;
  std::vector<Matrix> S;  // S[i] : A^i -> A^{n-i}
};

StarOp bar_star_op(const Bicomplex& b, const TotComplex& t);
Vec apply_star(const StarOp& op, int degree, const Vec& v);

struct HodgeData {
  int n = 0;
  std::vector<int> dims;
  std::vector<Matrix> d;       // d[i] : A^i -> A^{i+1}
  std::vector<Matrix> dstar;   // dstar[i] : A^i -> A^{i-1}, from the star route
  std::vector<Matrix> delta;   // dd* + d*d per degree
  std::vector<Subspace> harmonic;
  StarOp star;
};

// Builds d* = (sign) star d star and the Laplacian, and verifies exactly that
// d* is the metric adjoint: h(d a, b) = h(a, d* b) on all basis pairs, i.e.
// matrix(d*) equals the conjugate transpose of matrix(d). Throws on failure.
HodgeData laplacian(const Bicomplex& b);

struct HodgeSplit {
  Subspace harmonic, im_d, im_dstar;
};

// A^p = ker Delta (+) d A^{p-1} (+) d* A^{p+1}; dimensions and pairwise
// independence are verified exactly.
HodgeSplit hodge_decompose(const HodgeData& h, int degree);

struct Cohomology {
  std::vector<int> dims;
  std::vector<std::vector<Vec>> reps;
};

// Rank/kernel route: works on any finite cochain complex.
Cohomology cohomology_ranks(const ChainComplex& c);
// Harmonic route on a PD-type complex; cross-checked against the rank route.
Cohomology cohomology_harmonic(const Bicomplex& b);

struct InducedMapReport {
  std::vector<Matrix> maps;  // per degree, H^k(sub) -> H^k(amb)
  std::vector<bool> injective;
  bool all_injective = true;
};

// Induced map in cohomology of a basis-compatible inclusion sub <= amb.
// Verifies that the inclusion is a chain map.
InducedMapReport induced_map(const Bicomplex& sub, const Bicomplex& amb);

// Tot-degree inclusion matrices of a basis-compatible inclusion.
std::vector<Matrix> inclusion_matrices(const Bicomplex& sub, const Bicomplex& amb,
                                       const TotComplex& tsub, const TotComplex& tamb);

}  // namespace fss
