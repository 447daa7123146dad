#include "fss/bicomplex.hpp"

#include <algorithm>

namespace fss {

int Bicomplex::dim(int p, int q) const {
  auto it = cell_dims.find(CellKey{p, q});
  return it == cell_dims.end() ? 0 : it->second;
}

const std::vector<TwistedElement>& Bicomplex::basis(int p, int q) const {
  static const std::vector<TwistedElement> empty;
  auto it = cells.find(CellKey{p, q});
  return it == cells.end() ? empty : it->second;
}

int Bicomplex::find(int p, int q, const TwistedElement& e) const {
  const auto& bas = basis(p, q);
  for (size_t i = 0; i < bas.size(); ++i)
    if (bas[i] == e) return static_cast<int>(i);
  return -1;
}

int Bicomplex::total_dim() const {
  int n = 0;
  for (const auto& [k, d] : cell_dims) n += d;
  return n;
}

Matrix Bicomplex::mat10(int p, int q) const {
  auto it = d10.find(CellKey{p, q});
  if (it != d10.end()) return it->second;
  return Matrix(dim(p + 1, q), dim(p, q));
}

Matrix Bicomplex::mat01(int p, int q) const {
  auto it = d01.find(CellKey{p, q});
  if (it != d01.end()) return it->second;
  return Matrix(dim(p, q + 1), dim(p, q));
}

std::vector<TwistedElement> full_selection(const ModelSpec& model) {
  int n = model.n_gens();
  std::vector<TwistedElement> out;
  out.reserve(size_t{1} << n);
  CharExpr none = expr_zero(model.n_bases());
  for (Mask m = 0; m < (Mask{1} << n); ++m) out.push_back(TwistedElement{none, m});
  return out;
}

namespace {

// Expand a differential expansion into a column of the cell-indexed matrix.
void fill_column(const Bicomplex& b, const ModelSpec& model, int p, int q,
                 const TwistedElement& src, const Expansion& dx, int target_p,
                 int target_q, Matrix& mat, int col) {
  for (const auto& t : dx) {
    auto [tp, tq] = bidegree(model, t.e.mono);
    if (tp != target_p || tq != target_q) continue;
    int row = b.find(tp, tq, t.e);
    if (row < 0) {
      throw error("selection is not closed under the differentials: d(" +
                  element_str(model, src) + ") at (" + std::to_string(p) + "," +
                  std::to_string(q) + ") contains the term " +
                  element_str(model, t.e) + " outside the selection");
    }
    mat.at(row, col) = t.c;
  }
}

}  // namespace

Bicomplex assemble_bicomplex(const ModelSpec& model,
                             const std::vector<TwistedElement>& selection) {
  // Non-owning handle; the caller keeps the model alive.
  return assemble_bicomplex(std::shared_ptr<const ModelSpec>(&model, [](const ModelSpec*) {}),
                            selection);
}

Bicomplex assemble_bicomplex(std::shared_ptr<const ModelSpec> model_ptr,
                             const std::vector<TwistedElement>& selection) {
  const ModelSpec& model = *model_ptr;
  Bicomplex b;
  b.model = std::move(model_ptr);
  for (const auto& e : selection) {
    auto [p, q] = bidegree(model, e.mono);
    b.cells[CellKey{p, q}].push_back(e);
    b.pmax = std::max(b.pmax, p);
    b.qmax = std::max(b.qmax, q);
  }
  for (auto& [key, bas] : b.cells) {
    std::sort(bas.begin(), bas.end(), element_less);
    for (size_t i = 0; i + 1 < bas.size(); ++i)
      require(!(bas[i] == bas[i + 1]), "duplicate element in selection");
    b.cell_dims[key] = static_cast<int>(bas.size());
  }
  for (const auto& [key, bas] : b.cells) {
    auto [p, q] = key;
    Matrix m10(b.dim(p + 1, q), b.dim(p, q));
    Matrix m01(b.dim(p, q + 1), b.dim(p, q));
    for (size_t c = 0; c < bas.size(); ++c) {
      Expansion dx = differential(model, bas[c]);
      fill_column(b, model, p, q, bas[c], dx, p + 1, q, m10, static_cast<int>(c));
      fill_column(b, model, p, q, bas[c], dx, p, q + 1, m01, static_cast<int>(c));
      // Every term must land in one of the two neighbour cells.
      for (const auto& t : dx) {
        auto [tp, tq] = bidegree(model, t.e.mono);
        bool ok = (tp == p + 1 && tq == q) || (tp == p && tq == q + 1);
        ensure(ok, "differential term of unexpected bidegree");
      }
    }
    b.d10[key] = std::move(m10);
    b.d01[key] = std::move(m01);
  }
  verify_axioms(b);
  return b;
}

void verify_axioms(const Bicomplex& b) {
  for (const auto& [key, dims] : b.cell_dims) {
    (void)dims;
    auto [p, q] = key;
    Matrix a = mul(b.mat10(p + 1, q), b.mat10(p, q));
    ensure(a.is_zero(), "del10 ∘ del10 != 0 at (" + std::to_string(p) + "," +
                            std::to_string(q) + ")");
    Matrix c = mul(b.mat01(p, q + 1), b.mat01(p, q));
    ensure(c.is_zero(), "del01 ∘ del01 != 0");
    Matrix anti = mul(b.mat01(p + 1, q), b.mat10(p, q)) +
                  mul(b.mat10(p, q + 1), b.mat01(p, q));
    ensure(anti.is_zero(), "del10 del01 + del01 del10 != 0");
  }
}

TotComplex tot(const Bicomplex& b) {
  TotComplex t;
  t.src = &b;
  t.kmax = b.pmax + b.qmax;
  t.dims.assign(t.kmax + 1, 0);
  // Cells of Tot^k ordered by ascending p.
  for (int k = 0; k <= t.kmax; ++k) {
    for (int p = 0; p <= k; ++p) {
      int q = k - p;
      int d = b.dim(p, q);
      if (d == 0) continue;
      t.offset[CellKey{p, q}] = t.dims[k];
      t.dims[k] += d;
    }
  }
  t.d.assign(t.kmax + 1, Matrix());
  for (int k = 0; k <= t.kmax; ++k) {
    int next = k + 1 <= t.kmax ? t.dims[k + 1] : 0;
    Matrix m(next, t.dims[k]);
    for (int p = 0; p <= k; ++p) {
      int q = k - p;
      int d = b.dim(p, q);
      if (d == 0) continue;
      int off = t.offset.at(CellKey{p, q});
      Matrix m10 = b.mat10(p, q);
      if (m10.rows > 0 && k + 1 <= t.kmax) {
        int toff = t.offset.at(CellKey{p + 1, q});
        for (int r = 0; r < m10.rows; ++r)
          for (int c = 0; c < d; ++c)
            if (!m10.at(r, c).is_zero()) m.at(toff + r, off + c) = m10.at(r, c);
      }
      Matrix m01 = b.mat01(p, q);
      if (m01.rows > 0 && k + 1 <= t.kmax) {
        int toff = t.offset.at(CellKey{p, q + 1});
        for (int r = 0; r < m01.rows; ++r)
          for (int c = 0; c < d; ++c)
            if (!m01.at(r, c).is_zero()) m.at(toff + r, off + c) = m01.at(r, c);
      }
    }
    t.d[k] = std::move(m);
  }
  return t;
}

int TotComplex::filtration_start(int k, int p) const {
  if (k < 0 || k > kmax) return 0;
  // First coordinate belonging to a cell with holomorphic degree >= p.
  int start = dims[k];
  for (const auto& [key, off] : offset) {
    if (key.p + key.q != k) continue;
    if (key.p >= p) start = std::min(start, off);
  }
  if (p <= 0) start = 0;
  return start;
}

Subspace TotComplex::filtration(int k, int p) const {
  if (k < 0 || k > kmax) return Subspace::zero(0);
  int n = dims[k];
  int start = filtration_start(k, p);
  std::vector<Vec> vecs;
  for (int i = start; i < n; ++i) {
    Vec v(n);
    v[i] = Scalar(1);
    vecs.push_back(std::move(v));
  }
  return Subspace::span(n, vecs);
}

Vec TotComplex::embed_cell(int p, int q, const Vec& cell_vec) const {
  int k = p + q;
  Vec v(dims[k]);
  if (cell_vec.empty()) return v;
  int off = offset.at(CellKey{p, q});
  for (size_t i = 0; i < cell_vec.size(); ++i) v[off + i] = cell_vec[i];
  return v;
}

Vec TotComplex::cell_component(int p, int q, const Vec& tot_vec) const {
  int d = src ? src->dim(p, q) : 0;
  Vec v(d);
  auto it = offset.find(CellKey{p, q});
  if (it == offset.end()) return v;
  for (int i = 0; i < d; ++i) v[i] = tot_vec[it->second + i];
  return v;
}

Vec wedge_tot(const Bicomplex& b, const TotComplex& t, int k1, const Vec& v1,
              int k2, const Vec& v2) {
  require(b.model != nullptr && !b.cells.empty(),
          "wedge products need a model-backed basis");
  int k = k1 + k2;
  Vec out(k <= t.kmax ? t.dims[k] : 0);
  if (out.empty()) return out;
  for (int p1 = 0; p1 <= k1; ++p1) {
    int q1 = k1 - p1;
    const auto& bas1 = b.basis(p1, q1);
    if (bas1.empty()) continue;
    int off1 = t.offset.at(CellKey{p1, q1});
    for (int p2 = 0; p2 <= k2; ++p2) {
      int q2 = k2 - p2;
      const auto& bas2 = b.basis(p2, q2);
      if (bas2.empty()) continue;
      int off2 = t.offset.at(CellKey{p2, q2});
      for (size_t i = 0; i < bas1.size(); ++i) {
        const Scalar& ci = v1[off1 + i];
        if (ci.is_zero()) continue;
        for (size_t j = 0; j < bas2.size(); ++j) {
          const Scalar& cj = v2[off2 + j];
          if (cj.is_zero()) continue;
          Expansion w = wedge(bas1[i], bas2[j]);
          for (const auto& term : w) {
            auto [tp, tq] = bidegree(*b.model, term.e.mono);
            int row = b.find(tp, tq, term.e);
            require(row >= 0, "selection is not closed under wedge products");
            out[t.offset.at(CellKey{tp, tq}) + row] += ci * cj * term.c;
          }
        }
      }
    }
  }
  return out;
}

ChainComplex chain_of(const TotComplex& t) {
  ChainComplex c;
  c.dims = t.dims;
  c.d = t.d;
  return c;
}

ChainComplex column_complex(const Bicomplex& b, int p) {
  ChainComplex c;
  c.dims.assign(b.qmax + 1, 0);
  c.d.assign(b.qmax + 1, Matrix());
  for (int q = 0; q <= b.qmax; ++q) c.dims[q] = b.dim(p, q);
  for (int q = 0; q <= b.qmax; ++q) {
    Matrix m = b.mat01(p, q);
    if (q == b.qmax) m = Matrix(0, c.dims[q]);
    c.d[q] = std::move(m);
  }
  return c;
}

Bicomplex kunneth_product(const Bicomplex& a, const Bicomplex& b) {
  Bicomplex out;
  out.label = a.label + " (x) " + b.label;
  out.pmax = a.pmax + b.pmax;
  out.qmax = a.qmax + b.qmax;
  // Block layout of each product cell: pairs (cellA, cellB) with cellA
  // ascending, then row-major (i*dimB + j) inside a block.
  struct Block {
    CellKey ka, kb;
    int offset, da, db;
  };
  std::map<CellKey, std::vector<Block>> blocks;
  for (const auto& [ka, da] : a.cell_dims) {
    if (da == 0) continue;
    for (const auto& [kb, db] : b.cell_dims) {
      if (db == 0) continue;
      CellKey key{ka.p + kb.p, ka.q + kb.q};
      auto& list = blocks[key];
      int off = 0;
      if (!list.empty()) off = list.back().offset + list.back().da * list.back().db;
      list.push_back(Block{ka, kb, off, da, db});
    }
  }
  for (const auto& [key, list] : blocks) {
    int total = list.back().offset + list.back().da * list.back().db;
    out.cell_dims[key] = total;
  }
  auto block_of = [&](CellKey key, CellKey ka, CellKey kb) -> const Block* {
    auto it = blocks.find(key);
    if (it == blocks.end()) return nullptr;
    for (const auto& blk : it->second)
      if (blk.ka == ka && blk.kb == kb) return &blk;
    return nullptr;
  };
  for (const auto& [key, list] : blocks) {
    Matrix m10(out.dim(key.p + 1, key.q), out.dim(key.p, key.q));
    Matrix m01(out.dim(key.p, key.q + 1), out.dim(key.p, key.q));
    for (const auto& blk : list) {
      int dega = blk.ka.p + blk.ka.q;
      Scalar sign(dega % 2 == 0 ? 1 : -1);
      // del(x (x) y) = del x (x) y + (-1)^{|x|} x (x) del y, for both types.
      Matrix a10 = a.mat10(blk.ka.p, blk.ka.q);
      if (a10.rows > 0) {
        const Block* tb = block_of(CellKey{key.p + 1, key.q},
                                   CellKey{blk.ka.p + 1, blk.ka.q}, blk.kb);
        if (tb)
          for (int r = 0; r < a10.rows; ++r)
            for (int c = 0; c < blk.da; ++c) {
              if (a10.at(r, c).is_zero()) continue;
              for (int j = 0; j < blk.db; ++j)
                m10.at(tb->offset + r * blk.db + j, blk.offset + c * blk.db + j) +=
                    a10.at(r, c);
            }
      }
      Matrix b10 = b.mat10(blk.kb.p, blk.kb.q);
      if (b10.rows > 0) {
        const Block* tb = block_of(CellKey{key.p + 1, key.q}, blk.ka,
                                   CellKey{blk.kb.p + 1, blk.kb.q});
        if (tb)
          for (int i = 0; i < blk.da; ++i)
            for (int r = 0; r < b10.rows; ++r)
              for (int c = 0; c < blk.db; ++c) {
                if (b10.at(r, c).is_zero()) continue;
                m10.at(tb->offset + i * b10.rows + r, blk.offset + i * blk.db + c) +=
                    sign * b10.at(r, c);
              }
      }
      Matrix a01 = a.mat01(blk.ka.p, blk.ka.q);
      if (a01.rows > 0) {
        const Block* tb = block_of(CellKey{key.p, key.q + 1},
                                   CellKey{blk.ka.p, blk.ka.q + 1}, blk.kb);
        if (tb)
          for (int r = 0; r < a01.rows; ++r)
            for (int c = 0; c < blk.da; ++c) {
              if (a01.at(r, c).is_zero()) continue;
              for (int j = 0; j < blk.db; ++j)
                m01.at(tb->offset + r * blk.db + j, blk.offset + c * blk.db + j) +=
                    a01.at(r, c);
            }
      }
      Matrix b01 = b.mat01(blk.kb.p, blk.kb.q);
      if (b01.rows > 0) {
        const Block* tb = block_of(CellKey{key.p, key.q + 1}, blk.ka,
                                   CellKey{blk.kb.p, blk.kb.q + 1});
        if (tb)
          for (int i = 0; i < blk.da; ++i)
            for (int r = 0; r < b01.rows; ++r)
              for (int c = 0; c < blk.db; ++c) {
                if (b01.at(r, c).is_zero()) continue;
                m01.at(tb->offset + i * b01.rows + r, blk.offset + i * blk.db + c) +=
                    sign * b01.at(r, c);
              }
      }
    }
    out.d10[key] = std::move(m10);
    out.d01[key] = std::move(m01);
  }
  verify_axioms(out);
  return out;
}

}  // namespace fss
