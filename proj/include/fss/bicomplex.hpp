#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fss/element.hpp"
#include "fss/linalg.hpp"
#include "fss/model.hpp"

namespace fss {

struct CellKey {
  int p = 0, q = 0;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

// Finite first-quadrant bicomplex with anticommuting differentials del10 of
// type (1,0) and del01 of type (0,1). Cell bases are twisted elements for
// model-backed complexes; abstract complexes (tensor products) carry only
// dimensions and matrices.
struct Bicomplex {
  std::shared_ptr<const ModelSpec> model;
  std::string label;
  int pmax = 0, qmax = 0;
  std::map<CellKey, std::vector<TwistedElement>> cells;
  std::map<CellKey, int> cell_dims;
  std::map<CellKey, Matrix> d10, d01;  // keyed by source cell

  int dim(int p, int q) const;
  const std::vector<TwistedElement>& basis(int p, int q) const;
  // Index of an element within its cell basis; -1 when absent.
  int find(int p, int q, const TwistedElement& e) const;
  bool has_basis() const { return !cells.empty() || total_dim() == 0; }
  int total_dim() const;
  Matrix mat10(int p, int q) const;  // zero-shaped when out of range
  Matrix mat01(int p, int q) const;
};

// Builds the bicomplex spanned by the given twisted elements. Checks that the
// span is closed under both differentials (reporting the escaping element and
// term otherwise) and verifies the three differential axioms exactly.
Bicomplex assemble_bicomplex(std::shared_ptr<const ModelSpec> model,
                             const std::vector<TwistedElement>& selection);
// Convenience for models with caller-managed lifetime.
Bicomplex assemble_bicomplex(const ModelSpec& model,
                             const std::vector<TwistedElement>& selection);

// All 2^n exterior monomials with trivial prefactor.
std::vector<TwistedElement> full_selection(const ModelSpec& model);

// Totalization: Tot^k = direct sum of cells with p+q = k, cells ordered by
// ascending p, so the column filtration F^p is a coordinate suffix.
struct TotComplex {
  const Bicomplex* src = nullptr;
  int kmax = 0;
  std::vector<int> dims;              // size kmax+1
  std::vector<Matrix> d;              // d[k] : Tot^k -> Tot^{k+1}; size kmax+1
  std::map<CellKey, int> offset;      // start of each cell inside Tot^{p+q}

  int filtration_start(int k, int p) const;  // first coordinate of F^p in Tot^k
  Subspace filtration(int k, int p) const;
  Vec embed_cell(int p, int q, const Vec& cell_vec) const;
  // Extract the (p,q)-component of a Tot vector.
  Vec cell_component(int p, int q, const Vec& tot_vec) const;
};

TotComplex tot(const Bicomplex& b);

// Wedge product of Tot-coordinate vectors, expanded in the bicomplex basis.
// Requires a model-backed bicomplex whose basis is closed under products.
Vec wedge_tot(const Bicomplex& b, const TotComplex& t, int k1, const Vec& v1,
              int k2, const Vec& v2);

// Plain cochain complex view (used for columns and abstract complexes).
struct ChainComplex {
  std::vector<int> dims;
  std::vector<Matrix> d;  // d[k] : C^k -> C^{k+1}; d.back() maps into 0
};

ChainComplex chain_of(const TotComplex& t);
// The column (p, *) with differential del01.
ChainComplex column_complex(const Bicomplex& b, int p);

// Tensor product of bicomplexes with the graded sign rule; abstract basis.
Bicomplex kunneth_product(const Bicomplex& a, const Bicomplex& b);

void verify_axioms(const Bicomplex& b);  // throws internal_error on failure

}  // namespace fss
