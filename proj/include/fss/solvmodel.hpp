#pragma once

#include <vector>

#include "fss/bicomplex.hpp"
#include "fss/model.hpp"
#include "fss/pages.hpp"
#include "fss/report.hpp"

namespace fss {

// Unitary-part resolution of one generator's action character alpha:
// beta, gamma unitary with alpha*beta^-1 and conj(alpha)*gamma^-1 holomorphic.
struct GenResolution {
  int gen = -1;
  CharExpr beta, gamma;
  CharExpr quot_beta, quot_gamma;  // the holomorphic quotients
  bool beta_trivial = false, gamma_trivial = false;
};

struct CharacterResolution {
  std::vector<GenResolution> per_gen;  // declared (1,0) generators, in order
};

CharacterResolution resolve_characters(const ModelSpec& m);

// Simultaneous eigenspace of the semi-simple action: all monomials of the
// non-abelian generators with a fixed total action character.
struct WeightBlock {
  CharExpr weight;     // mu
  CharExpr lambda;     // unitary part of mu
  CharExpr prefactor;  // lambda * mu^-1 (holomorphic)
  std::vector<Mask> monomials;
  bool weight_trivial = false, lambda_trivial = false;
};

enum class WeightSpace { nil_factor, holomorphic_columns };
std::vector<WeightBlock> weight_decomposition(const ModelSpec& m, WeightSpace which);

// The twisted-monomial basis of the Dolbeault model of a semidirect-product
// solvmanifold: x_I ^ (alpha_J^-1 beta_J) y_J ^ cx_K ^ (conj(alpha)_L^-1
// gamma_L) cy_L over all index sets with beta_J gamma_L trivial on the
// lattice.
Bicomplex build_semidirect_model(const ModelSpec& m);

// The model for a complex-parallelizable group: the full holomorphic exterior
// algebra (in its invariant frame) tensored with the lattice-trivial
// conjugate monomials (conj(alpha)_I / alpha_I) cx_I.
Bicomplex build_parallelizable_model(const ModelSpec& m);

// The invariant-frame sibling of a complex-parallelizable model: generator
// differentials absorb the action twist, d u_j = d_CE u_j - dlog10(alpha_j)^u_j.
ModelSpec invariant_frame_model(const ModelSpec& m);

// The untwisted ambient: same generators and structure constants, all
// characters erased, full monomial basis.
Bicomplex untwisted_ambient(const ModelSpec& m);
ModelSpec untwisted_model(const ModelSpec& m);

// Splits the semidirect model into the sub-bicomplex of lattice-trivial
// weights and its complement (nontrivial weight, trivial unitary part).
struct WeightSplit {
  Bicomplex trivial_part;   // C: blocks with mu trivial on the lattice
  Bicomplex twisted_part;   // D: blocks with a nontrivial holomorphic prefactor
  Report report;
};
WeightSplit split_trivial_weight(const ModelSpec& m);

// Exactness of (Lambda<x_1..x_n>, w ^ .) for a covector w on the abelian
// (1,0) generators; true when all cohomology vanishes.
bool koszul_exact(const ModelSpec& m, const Vec& w);

// Degeneracy pipeline for complex-parallelizable models: degeneracy step
// <= 2 and the block tensor structure of E_2 verified against Kunneth
// products.
Report pipeline_cos(const ModelSpec& m);

// Degeneracy pipeline for semidirect-product models: r(G) <= max(2, r(N)),
// E_2(B) = E_2(C), E_2(D) = 0, and page-level injectivity of C in the
// untwisted ambient.
Report pipeline_sps(const ModelSpec& m);

// Euler and duality verdicts on a Dolbeault table and Betti numbers of a
// PD-type model of complex dimension n.
Report euler_checks(const std::vector<std::vector<int>>& hodge_table,
                    const std::vector<int>& betti, int n);

// Dolbeault table h^{p,q} via column cohomology.
std::vector<std::vector<int>> dolbeault_table(const Bicomplex& b);
// Representatives per column degree.
std::vector<std::vector<std::vector<Vec>>> dolbeault_reps(const Bicomplex& b);

}  // namespace fss
