#include "fss/hodge.hpp"

#include <algorithm>
#include <sstream>

namespace fss {

namespace {

int top_nonzero_degree(const TotComplex& t) {
  for (int k = t.kmax; k >= 0; --k)
    if (t.dims[k] > 0) return k;
  return -1;
}

Matrix conj_matrix(const Matrix& m) {
  Matrix out = m;
  for (auto& x : out.a) x = x.conj();
  return out;
}

}  // namespace

PdReport check_pd_type(const Bicomplex& b) {
  PdReport rep;
  require(b.model != nullptr && b.has_basis(), "PD check needs a model-backed basis");
  TotComplex t = tot(b);
  int n = top_nonzero_degree(t);
  rep.top_degree = n;
  if (n < 0) {
    rep.failures.push_back({0, "empty algebra"});
    return rep;
  }
  if (t.dims[0] != 1) {
    rep.failures.push_back({0, "A^0 is not one-dimensional"});
  } else {
    const TwistedElement& one = b.basis(0, 0).at(0);
    if (one.mono != 0 || !expr_is_zero(one.pre))
      rep.failures.push_back({0, "A^0 is not spanned by the unit"});
  }
  if (t.dims[n] != 1) rep.failures.push_back({n, "top degree is not one-dimensional"});
  if (rep.failures.empty()) {
    for (int i = 1; i < n; ++i) {
      if (t.dims[i] != t.dims[n - i]) {
        rep.failures.push_back({i, "pairing dimensions differ"});
        continue;
      }
      // Pairing matrix into the top cell.
      Matrix P(t.dims[i], t.dims[n - i]);
      for (int a = 0; a < t.dims[i]; ++a) {
        Vec ea(t.dims[i]);
        ea[a] = Scalar(1);
        for (int c = 0; c < t.dims[n - i]; ++c) {
          Vec ec(t.dims[n - i]);
          ec[c] = Scalar(1);
          Vec w = wedge_tot(b, t, i, ea, n - i, ec);
          P.at(a, c) = w.empty() ? Scalar(0) : w[0];
        }
      }
      if (rank(P) != t.dims[i])
        rep.failures.push_back({i, "wedge pairing into the top degree is degenerate"});
    }
    if (n >= 1 && !t.d[n - 1].is_zero())
      rep.failures.push_back({n - 1, "d does not vanish on degree n-1"});
    if (!t.d[0].is_zero()) rep.failures.push_back({0, "d does not vanish on degree 0"});
  }
  rep.is_pd = rep.failures.empty();
  return rep;
}

StarOp bar_star_op(const Bicomplex& b, const TotComplex& t) {
  StarOp op;
  int n = top_nonzero_degree(t);
  require(n >= 0 && t.dims[n] == 1, "bar-star needs a one-dimensional top degree");
  op.n = n;
  op.S.assign(n + 1, Matrix());
  // Locate the top element.
  TwistedElement vol;
  for (int p = 0; p <= b.pmax; ++p) {
    const auto& bas = b.basis(p, n - p);
    if (!bas.empty()) vol = bas[0];
  }
  for (int i = 0; i <= n; ++i) {
    Matrix S(t.dims[n - i], t.dims[i]);
    for (int p = 0; p <= i; ++p) {
      int q = i - p;
      const auto& bas = b.basis(p, q);
      for (size_t a = 0; a < bas.size(); ++a) {
        int col = t.offset.at(CellKey{p, q}) + static_cast<int>(a);
        Mask ma = bas[a].mono;
        require((ma & vol.mono) == ma,
                "ambient not PD-type: element outside the volume support");
        Mask mc = vol.mono & ~ma;
        auto [cp, cq] = bidegree(*b.model, mc);
        int row = -1;
        const auto& cbas = b.basis(cp, cq);
        for (size_t j = 0; j < cbas.size(); ++j)
          if (cbas[j].mono == mc) row = static_cast<int>(j);
        require(row >= 0, "ambient not PD-type: missing complementary element for " +
                              element_str(*b.model, bas[a]));
        Expansion w = wedge(bas[a], cbas[row]);
        ensure(w.size() == 1, "complement wedge not a single term");
        require(w[0].e == vol, "ambient not PD-type: complement pairing misses the volume");
        // a ^ star(a) = v  =>  sigma = 1/c with a ^ complement = c v.
        Scalar sigma = w[0].c.inverse();
        S.at(t.offset.at(CellKey{cp, cq}) + row, col) = sigma;
      }
    }
    op.S[i] = std::move(S);
  }
  return op;
}

Vec apply_star(const StarOp& op, int degree, const Vec& v) {
  return apply(op.S[degree], conj(v));
}

HodgeData laplacian(const Bicomplex& b) {
  PdReport pd = check_pd_type(b);
  if (!pd.is_pd) {
    std::ostringstream os;
    os << "complex is not of PD-type:";
    for (const auto& [deg, why] : pd.failures) os << " [degree " << deg << "] " << why;
    throw error(os.str());
  }
  TotComplex t = tot(b);
  HodgeData h;
  h.n = pd.top_degree;
  h.dims = t.dims;
  h.d = t.d;
  h.star = bar_star_op(b, t);
  int n = h.n;
  h.dstar.assign(n + 1, Matrix());
  for (int i = 0; i <= n; ++i) {
    if (i == 0 || t.dims[i] == 0) {
      h.dstar[i] = Matrix(i > 0 ? t.dims[i - 1] : 0, t.dims[i]);
      continue;
    }
    // d* on A^i: (sign) star d star, with the degree sign making it the
    // metric adjoint; for even top degree the sign is the constant -1.
    long e = static_cast<long>(i) + static_cast<long>(n - i + 1) * (i - 1);
    Scalar sign(e % 2 == 0 ? 1 : -1);
    Matrix m = mul(h.star.S[n - i + 1],
                   mul(conj_matrix(t.d[n - i]), conj_matrix(h.star.S[i])));
    for (auto& x : m.a) x *= sign;
    h.dstar[i] = std::move(m);
  }
  // Adjointness h(d a, b) = h(a, d* b): matrix(d*) == matrix(d)^dagger.
  for (int i = 1; i <= n; ++i) {
    if (h.dstar[i] != t.d[i - 1].conj_transpose())
      throw error("adjointness failure at degree " + std::to_string(i) +
                  " (PD-type or star bug)");
  }
  h.delta.assign(n + 1, Matrix());
  h.harmonic.assign(n + 1, Subspace());
  for (int i = 0; i <= n; ++i) {
    Matrix acc(t.dims[i], t.dims[i]);
    if (i > 0) acc = acc + mul(t.d[i - 1], h.dstar[i]);
    if (i < n) acc = acc + mul(h.dstar[i + 1], t.d[i]);
    h.delta[i] = std::move(acc);
    h.harmonic[i] = kernel_basis(h.delta[i]);
  }
  return h;
}

HodgeSplit hodge_decompose(const HodgeData& h, int degree) {
  require(degree >= 0 && degree <= h.n, "degree out of range");
  HodgeSplit s;
  s.harmonic = h.harmonic[degree];
  s.im_d = degree > 0 ? column_space(h.d[degree - 1]) : Subspace::zero(h.dims[degree]);
  s.im_dstar = degree < h.n ? column_space(h.dstar[degree + 1])
                            : Subspace::zero(h.dims[degree]);
  ensure(intersect(s.harmonic, s.im_d).dim() == 0 &&
             intersect(s.harmonic, s.im_dstar).dim() == 0 &&
             intersect(s.im_d, s.im_dstar).dim() == 0,
         "Hodge decomposition: summands are not independent");
  ensure(s.harmonic.dim() + s.im_d.dim() + s.im_dstar.dim() == h.dims[degree],
         "Hodge decomposition: dimensions do not sum");
  // Harmonic space matches the rank-computed cohomology dimension.
  int ker = h.dims[degree] - (degree < h.n ? rank(h.d[degree]) : 0);
  int im = degree > 0 ? rank(h.d[degree - 1]) : 0;
  ensure(s.harmonic.dim() == ker - im, "harmonic dimension != rank-computed cohomology");
  return s;
}

Cohomology cohomology_ranks(const ChainComplex& c) {
  Cohomology out;
  int kmax = static_cast<int>(c.dims.size()) - 1;
  out.dims.assign(kmax + 1, 0);
  out.reps.assign(kmax + 1, {});
  for (int k = 0; k <= kmax; ++k) {
    ensure(c.d[k].cols == c.dims[k], "chain complex differential shape mismatch");
    Subspace ker = kernel_basis(c.d[k]);
    Subspace im = k > 0 ? column_space(c.d[k - 1]) : Subspace::zero(c.dims[k]);
    QuotientBasis qb = quotient_basis(ker, im);
    out.dims[k] = qb.dim;
    out.reps[k] = qb.reps;
  }
  return out;
}

Cohomology cohomology_harmonic(const Bicomplex& b) {
  HodgeData h = laplacian(b);
  Cohomology out;
  out.dims.assign(h.n + 1, 0);
  out.reps.assign(h.n + 1, {});
  for (int k = 0; k <= h.n; ++k) {
    out.dims[k] = h.harmonic[k].dim();
    out.reps[k] = h.harmonic[k].vectors();
  }
  // The two routes are permanent mutual oracles.
  TotComplex t = tot(b);
  Cohomology ranks = cohomology_ranks(chain_of(t));
  for (int k = 0; k <= h.n; ++k)
    ensure(ranks.dims[k] == out.dims[k],
           "harmonic and rank cohomology dimensions disagree at degree " +
               std::to_string(k));
  return out;
}

std::vector<Matrix> inclusion_matrices(const Bicomplex& sub, const Bicomplex& amb,
                                       const TotComplex& tsub, const TotComplex& tamb) {
  std::vector<Matrix> inc(tsub.kmax + 1);
  for (int k = 0; k <= tsub.kmax; ++k) {
    int arows = k <= tamb.kmax ? tamb.dims[k] : 0;
    Matrix m(arows, tsub.dims[k]);
    for (int p = 0; p <= k; ++p) {
      int q = k - p;
      const auto& bas = sub.basis(p, q);
      for (size_t i = 0; i < bas.size(); ++i) {
        int row = amb.find(p, q, bas[i]);
        require(row >= 0, "inclusion is not basis-compatible: " +
                              (sub.model ? element_str(*sub.model, bas[i])
                                         : std::string("<abstract>")) +
                              " is missing from the ambient complex");
        m.at(tamb.offset.at(CellKey{p, q}) + row,
             tsub.offset.at(CellKey{p, q}) + static_cast<int>(i)) = Scalar(1);
      }
    }
    inc[k] = std::move(m);
  }
  return inc;
}

InducedMapReport induced_map(const Bicomplex& sub, const Bicomplex& amb) {
  TotComplex tsub = tot(sub), tamb = tot(amb);
  std::vector<Matrix> inc = inclusion_matrices(sub, amb, tsub, tamb);
  // Chain-map check in every degree.
  for (int k = 0; k < tsub.kmax; ++k) {
    Matrix lhs = mul(inc[k + 1], tsub.d[k]);
    Matrix rhs = mul(tamb.d[k], inc[k]);
    require(lhs == rhs, "inclusion is not a chain map at degree " + std::to_string(k));
  }
  Cohomology hs = cohomology_ranks(chain_of(tsub));
  Cohomology ha = cohomology_ranks(chain_of(tamb));
  InducedMapReport rep;
  rep.maps.resize(tsub.kmax + 1);
  rep.injective.assign(tsub.kmax + 1, true);
  for (int k = 0; k <= tsub.kmax; ++k) {
    int hsd = hs.dims[k];
    int had = k <= tamb.kmax ? ha.dims[k] : 0;
    Matrix m(had, hsd);
    if (hsd > 0) {
      Subspace im_amb = k > 0 ? column_space(tamb.d[k - 1])
                              : Subspace::zero(tamb.dims[k]);
      Expressor ex(ha.reps[k], im_amb, tamb.dims[k]);
      for (int j = 0; j < hsd; ++j) {
        Vec w = apply(inc[k], hs.reps[k][j]);
        auto coords = ex(w);
        ensure(coords.has_value(), "induced map: image class not expressible");
        for (int r = 0; r < had; ++r) m.at(r, j) = (*coords)[r];
      }
    }
    rep.injective[k] = rank(m) == hsd;
    rep.all_injective = rep.all_injective && rep.injective[k];
    rep.maps[k] = std::move(m);
  }
  return rep;
}

}  // namespace fss
