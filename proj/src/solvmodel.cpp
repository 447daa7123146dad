#include "fss/solvmodel.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "fss/hodge.hpp"

namespace fss {

namespace {

bool is_abelian_gen(const ModelSpec& m, int g) {
  int base = m.gens[g].declared ? g : m.gens[g].conj_gen;
  return std::find(m.abelian.begin(), m.abelian.end(), base) != m.abelian.end();
}

std::string expr_text(const ModelSpec& m, const CharExpr& e) {
  std::vector<std::string> names;
  for (const auto& b : m.bases) names.push_back(b.name);
  return expr_str(e, names);
}

}  // namespace

CharacterResolution resolve_characters(const ModelSpec& m) {
  CharacterResolution res;
  for (int g = 0; g < m.n_gens(); ++g) {
    if (!m.gens[g].declared || m.gens[g].anti) continue;
    GenResolution r;
    r.gen = g;
    const CharExpr& a = m.gens[g].action;
    r.beta = m.beta_of(a);
    r.gamma = m.gamma_of(a);
    r.quot_beta = expr_sub(a, r.beta);
    r.quot_gamma = expr_sub(m.conj_expr(a), r.gamma);
    ensure(m.is_unitary(r.beta) && m.is_unitary(r.gamma),
           "unitary part of " + m.gens[g].name + " is not unitary");
    ensure(m.is_holomorphic(r.quot_beta) && m.is_holomorphic(r.quot_gamma),
           "holomorphic quotient of " + m.gens[g].name + " is not holomorphic");
    r.beta_trivial = m.lattice_trivial(r.beta);
    r.gamma_trivial = m.lattice_trivial(r.gamma);
    res.per_gen.push_back(std::move(r));
  }
  return res;
}

std::vector<WeightBlock> weight_decomposition(const ModelSpec& m, WeightSpace which) {
  // Monomial pool: nil-factor uses the non-abelian generators and their
  // conjugates; holomorphic columns use all (1,0) generators.
  std::vector<int> pool;
  for (int g = 0; g < m.n_gens(); ++g) {
    bool take = which == WeightSpace::nil_factor ? !is_abelian_gen(m, g)
                                                 : !m.gens[g].anti;
    if (take) pool.push_back(g);
  }
  require(pool.size() <= 20, "weight decomposition: too many generators");
  std::map<CharExpr, WeightBlock> blocks;
  for (Mask sub = 0; sub < (Mask{1} << pool.size()); ++sub) {
    Mask mono = 0;
    for (size_t i = 0; i < pool.size(); ++i)
      if (sub & (Mask{1} << i)) mono |= Mask{1} << pool[i];
    CharExpr w = action_char(m, mono);
    auto [it, fresh] = blocks.try_emplace(w);
    if (fresh) {
      it->second.weight = w;
      it->second.lambda = m.beta_of(w);
      it->second.prefactor = expr_sub(it->second.lambda, w);
      it->second.weight_trivial = m.lattice_trivial(w);
      it->second.lambda_trivial = m.lattice_trivial(it->second.lambda);
      ensure(m.is_holomorphic(it->second.prefactor),
             "weight block prefactor is not holomorphic");
    }
    it->second.monomials.push_back(mono);
  }
  std::vector<WeightBlock> out;
  for (auto& [w, blk] : blocks) out.push_back(std::move(blk));
  return out;
}

Bicomplex build_semidirect_model(const ModelSpec& m) {
  for (const auto& g : m.gens)
    require(!g.declared || !g.anti,
            "semidirect model builder requires declared (1,0) generators");
  CharacterResolution res = resolve_characters(m);
  std::map<int, CharExpr> factor;  // per-generator prefactor contribution
  int nb = m.n_bases();
  for (const auto& r : res.per_gen) {
    factor[r.gen] = is_abelian_gen(m, r.gen) ? expr_zero(nb) : r.quot_beta;
    factor[m.gens[r.gen].conj_gen] =
        is_abelian_gen(m, r.gen) ? expr_zero(nb) : r.quot_gamma;
  }
  std::map<int, CharExpr> unitary;  // per-generator beta / gamma contribution
  for (const auto& r : res.per_gen) {
    unitary[r.gen] = is_abelian_gen(m, r.gen) ? expr_zero(nb) : r.beta;
    unitary[m.gens[r.gen].conj_gen] =
        is_abelian_gen(m, r.gen) ? expr_zero(nb) : r.gamma;
  }
  int n = m.n_gens();
  require(n <= 20, "semidirect model: too many generators");
  std::vector<TwistedElement> sel;
  for (Mask mono = 0; mono < (Mask{1} << n); ++mono) {
    CharExpr uni = expr_zero(nb), pre = expr_zero(nb);
    for (int g : mask_bits(mono)) {
      uni = expr_add(uni, unitary.at(g));
      pre = expr_add(pre, factor.at(g));
    }
    if (!m.lattice_trivial(uni)) continue;
    sel.push_back(TwistedElement{pre, mono});
  }
  Bicomplex b = assemble_bicomplex(m, sel);
  b.label = m.name + ":semidirect";
  return b;
}

ModelSpec invariant_frame_model(const ModelSpec& m) {
  require(m.complex_parallelizable,
          "invariant frame model requires the complex-parallelizable flag");
  ModelInput in;
  in.name = m.name + ":frame";
  in.complex_parallelizable = true;
  in.consts = m.consts;
  // Re-declare the base characters verbatim.
  for (const auto& b : m.bases) {
    if (b.origin != BaseCharacter::Origin::declared) continue;
    ModelInput::BaseCharDecl d;
    d.name = b.name;
    d.kind = b.kind;
    std::string s10, s01;
    for (int g = 0; g < m.n_gens(); ++g) {
      if (!b.dlog10[g].is_zero())
        s10 += (s10.empty() ? "" : " + ") + ("(" + b.dlog10[g].str() + ")*" +
                                             m.gens[g].name);
      if (!b.dlog01[g].is_zero())
        s01 += (s01.empty() ? "" : " + ") + ("(" + b.dlog01[g].str() + ")*" +
                                             m.gens[g].name);
    }
    d.dlog10 = s10;
    d.dlog01 = s01;
    if (b.conj_base >= 0) {
      if (b.conj_base == static_cast<int>(&b - m.bases.data()))
        d.conj = b.conj_sign == 1 ? "self" : "self^-1";
      else if (m.bases[b.conj_base].origin == BaseCharacter::Origin::declared)
        d.conj = m.bases[b.conj_base].name;
    }
    in.base_chars.push_back(std::move(d));
  }
  std::vector<std::string> names;
  for (const auto& b : m.bases) names.push_back(b.name);
  for (const auto& gen_name : m.abelian) in.abelian_factor.push_back(m.gens[gen_name].name);
  // Lattice rows re-expressed over the base names.
  for (const auto& row : m.triviality.hnf) {
    std::string s;
    for (int i = 0; i < m.n_bases(); ++i) {
      if (row[i] == 0) continue;
      if (!s.empty()) s += "*";
      s += m.bases[i].name + "^" + row[i].get_str();
    }
    if (!s.empty()) in.lattice.push_back(s);
  }
  // Twisted differentials: d u = d_CE u - dlog10(alpha_u) ^ u.
  for (int g = 0; g < m.n_gens(); ++g) {
    if (!m.gens[g].declared) continue;
    require(!m.gens[g].anti, "complex-parallelizable model must declare (1,0) generators");
    ModelInput::GeneratorDecl d;
    d.name = m.gens[g].name;
    d.p = 1;
    d.q = 0;
    d.action = expr_str(m.gens[g].action, names);
    for (const DiffTerm& t : m.gens[g].differential)
      d.diff_terms.push_back(InputDiffTerm{t.coeff, m.gens[t.g1].name, m.gens[t.g2].name});
    Vec w = m.dlog10_of(m.gens[g].action);
    for (int h = 0; h < m.n_gens(); ++h) {
      if (w[h].is_zero()) continue;
      require(h != g, "action dlog touches the generator itself");
      d.diff_terms.push_back(InputDiffTerm{-w[h], m.gens[h].name, m.gens[g].name});
    }
    in.generators.push_back(std::move(d));
  }
  return build_model(in);
}

Bicomplex build_parallelizable_model(const ModelSpec& m) {
  auto frame = std::make_shared<ModelSpec>(invariant_frame_model(m));
  // Selection: x_J (bare) wedge lattice-trivial (conj(alpha_I)/alpha_I) cx_I.
  int nd = 0;
  for (const auto& g : frame->gens)
    if (g.declared) ++nd;
  std::vector<TwistedElement> sel;
  for (Mask ibits = 0; ibits < (Mask{1} << nd); ++ibits) {
    Mask cmask = ibits << nd;  // conjugate block
    CharExpr alpha_i = expr_zero(frame->n_bases());
    for (int g : mask_bits(Mask{ibits})) alpha_i = expr_add(alpha_i, frame->gens[g].action);
    CharExpr ratio = expr_sub(frame->conj_expr(alpha_i), alpha_i);
    if (!frame->lattice_trivial(ratio)) continue;
    for (Mask jbits = 0; jbits < (Mask{1} << nd); ++jbits)
      sel.push_back(TwistedElement{ratio, jbits | cmask});
  }
  Bicomplex b = assemble_bicomplex(frame, sel);
  b.label = m.name + ":parallelizable";
  return b;
}

ModelSpec untwisted_model(const ModelSpec& m) {
  ModelInput in;
  in.name = m.name + ":untwisted";
  for (int g = 0; g < m.n_gens(); ++g) {
    if (!m.gens[g].declared) continue;
    ModelInput::GeneratorDecl d;
    d.name = m.gens[g].name;
    d.p = m.gens[g].anti ? 0 : 1;
    d.q = m.gens[g].anti ? 1 : 0;
    for (const DiffTerm& t : m.gens[g].differential)
      d.diff_terms.push_back(InputDiffTerm{t.coeff, m.gens[t.g1].name, m.gens[t.g2].name});
    in.generators.push_back(std::move(d));
  }
  for (int g : m.abelian) in.abelian_factor.push_back(m.gens[g].name);
  return build_model(in);
}

Bicomplex untwisted_ambient(const ModelSpec& m) {
  auto um = std::make_shared<ModelSpec>(untwisted_model(m));
  Bicomplex b = assemble_bicomplex(um, full_selection(*um));
  b.label = m.name + ":ambient";
  return b;
}

WeightSplit split_trivial_weight(const ModelSpec& m) {
  WeightSplit out;
  out.report.command = "split-trivial-weight";
  Bicomplex b = build_semidirect_model(m);
  std::vector<TwistedElement> c_sel, d_sel;
  for (const auto& [key, bas] : b.cells) {
    (void)key;
    for (const auto& e : bas) {
      CharExpr mu = action_char(m, e.mono);
      if (m.lattice_trivial(mu)) c_sel.push_back(e);
      else d_sel.push_back(e);
    }
  }
  out.trivial_part = assemble_bicomplex(m, c_sel);
  out.trivial_part.label = m.name + ":weight-trivial";
  out.twisted_part = assemble_bicomplex(m, d_sel);
  out.twisted_part.label = m.name + ":weight-twisted";
  // Cellwise dim B = dim C + dim D.
  bool dims_ok = true;
  for (const auto& [key, dim] : b.cell_dims)
    if (dim != out.trivial_part.dim(key.p, key.q) + out.twisted_part.dim(key.p, key.q))
      dims_ok = false;
  out.report.verdict("cellwise_B_eq_C_plus_D", dims_ok);
  // Koszul vanishing per twisted block prefactor.
  bool koszul_ok = true;
  std::map<CharExpr, bool> seen;
  for (const auto& e : d_sel) {
    CharExpr mu = action_char(m, e.mono);
    CharExpr pre = expr_sub(m.beta_of(mu), mu);
    if (seen.count(pre)) continue;
    seen[pre] = true;
    Vec w = m.dlog10_of(pre);
    ensure(!is_zero(w), "twisted block with zero holomorphic weight");
    if (!koszul_exact(m, w)) koszul_ok = false;
  }
  out.report.verdict("koszul_vanishing", koszul_ok);
  // E_2(D) = 0 cell by cell.
  bool e2d_zero = true;
  if (out.twisted_part.total_dim() > 0) {
    PageStack sd = pages_direct(out.twisted_part);
    for (const auto& [key, cell] : page_clamped(sd, 2).cells)
      if (cell.dim != 0) e2d_zero = false;
  }
  out.report.verdict("E2_twisted_part_zero", e2d_zero);
  // E_2(B) = E_2(C) dimensionwise.
  PageStack sb = pages_direct(b);
  PageStack sc = pages_direct(out.trivial_part);
  bool e2_eq = true;
  for (int p = 0; p <= b.pmax; ++p)
    for (int q = 0; q <= b.qmax; ++q)
      if (page_clamped(sb, 2).dim(p, q) != page_clamped(sc, 2).dim(p, q)) e2_eq = false;
  out.report.verdict("E2_B_eq_E2_C", e2_eq);
  return out;
}

bool koszul_exact(const ModelSpec& m, const Vec& w) {
  // Complex: exterior algebra on the abelian (1,0) generators, d = w ^ -.
  std::vector<int> pool;
  for (int g : m.abelian) pool.push_back(g);
  if (pool.empty())
    for (int g = 0; g < m.n_gens(); ++g)
      if (!m.gens[g].anti && m.gens[g].differential.empty() &&
          expr_is_zero(m.gens[g].action))
        pool.push_back(g);
  int n = static_cast<int>(pool.size());
  std::vector<std::vector<Mask>> by_deg(n + 1);
  for (Mask s = 0; s < (Mask{1} << n); ++s) {
    Mask mono = 0;
    for (int i = 0; i < n; ++i)
      if (s & (Mask{1} << i)) mono |= Mask{1} << pool[i];
    by_deg[mask_degree(mono)].push_back(mono);
  }
  for (auto& v : by_deg) std::sort(v.begin(), v.end(), mask_lex_less);
  ChainComplex c;
  c.dims.resize(n + 1);
  c.d.resize(n + 1);
  for (int k = 0; k <= n; ++k) c.dims[k] = static_cast<int>(by_deg[k].size());
  for (int k = 0; k <= n; ++k) {
    Matrix mat(k + 1 <= n ? c.dims[k + 1] : 0, c.dims[k]);
    if (k < n) {
      for (int j = 0; j < c.dims[k]; ++j) {
        Mask mono = by_deg[k][j];
        for (int g : pool) {
          Mask bit = Mask{1} << g;
          if ((mono & bit) || w[g].is_zero()) continue;
          Mask tgt = mono | bit;
          int row = static_cast<int>(
              std::find(by_deg[k + 1].begin(), by_deg[k + 1].end(), tgt) -
              by_deg[k + 1].begin());
          mat.at(row, j) += Scalar(merge_sign(bit, mono)) * w[g];
        }
      }
    }
    c.d[k] = std::move(mat);
  }
  Cohomology h = cohomology_ranks(c);
  return std::all_of(h.dims.begin(), h.dims.end(), [](int d) { return d == 0; });
}

Report pipeline_cos(const ModelSpec& m) {
  Report rep;
  rep.command = "pipeline-cos";
  require(m.complex_parallelizable, "pipeline-cos requires a complex-parallelizable model");
  Bicomplex b = build_parallelizable_model(m);
  const ModelSpec& frame = *b.model;
  PageStack direct = pages_direct(b);
  PageStack iter = pages_iterative(b);
  rep.put("rstep", static_cast<long>(direct.degeneracy));
  rep.verdict("dual_page_algorithms_agree", stacks_agree(direct, iter));
  rep.verdict("degeneracy_at_most_2", direct.degeneracy <= 2,
              "rstep = " + std::to_string(direct.degeneracy));

  // Block tensor structure of E_2: group conjugate index sets by weight.
  int nd = 0;
  for (const auto& g : frame.gens)
    if (g.declared) ++nd;
  std::map<CharExpr, std::vector<Mask>> blocks;  // alpha_I exponent -> I masks
  for (Mask ibits = 0; ibits < (Mask{1} << nd); ++ibits) {
    CharExpr alpha_i = expr_zero(frame.n_bases());
    for (int g : mask_bits(ibits)) alpha_i = expr_add(alpha_i, frame.gens[g].action);
    CharExpr ratio = expr_sub(frame.conj_expr(alpha_i), alpha_i);
    if (!frame.lattice_trivial(ratio)) continue;
    blocks[alpha_i].push_back(ibits);
  }
  std::map<CellKey, int> block_dims, e2_formula;
  bool kunneth_ok = true;
  for (const auto& [alpha_i, isets] : blocks) {
    // Column factor: (nu Lambda g+*, del10) with nu = alpha_I^-1.
    CharExpr nu = expr_neg(alpha_i);
    std::vector<TwistedElement> colsel;
    for (Mask j = 0; j < (Mask{1} << nd); ++j)
      colsel.push_back(TwistedElement{nu, j});
    Bicomplex col = assemble_bicomplex(frame, colsel);
    // Row factor: (1/conj(nu)) cx_I over the block.
    CharExpr rowpre = frame.conj_expr(alpha_i);
    std::vector<TwistedElement> rowsel;
    for (Mask ibits : isets) rowsel.push_back(TwistedElement{rowpre, ibits << nd});
    Bicomplex row = assemble_bicomplex(frame, rowsel);
    KunnethCheck kc = kunneth_verified(col, row);
    if (!kc.ok) kunneth_ok = false;
    Cohomology hc = cohomology_ranks(chain_of(tot(col)));
    Cohomology hr = cohomology_ranks(chain_of(tot(row)));
    for (int p = 0; p < static_cast<int>(hc.dims.size()); ++p)
      for (int q = 0; q < static_cast<int>(hr.dims.size()); ++q)
        if (hc.dims[p] * hr.dims[q] > 0)
          e2_formula[CellKey{p, q}] += hc.dims[p] * hr.dims[q];
    for (const auto& [key, d] : col.cell_dims)
      for (const auto& [key2, d2] : row.cell_dims)
        block_dims[CellKey{key.p + key2.p, key.q + key2.q}] += d * d2;
  }
  bool decomposition_ok = true;
  for (const auto& [key, d] : b.cell_dims)
    if (d != block_dims[key]) decomposition_ok = false;
  rep.verdict("block_decomposition_spans_model", decomposition_ok);
  rep.verdict("kunneth_factor_check", kunneth_ok);
  bool e2_ok = true;
  for (int p = 0; p <= b.pmax; ++p)
    for (int q = 0; q <= b.qmax; ++q) {
      auto it = e2_formula.find(CellKey{p, q});
      int expect = it == e2_formula.end() ? 0 : it->second;
      if (page_clamped(direct, 2).dim(p, q) != expect) e2_ok = false;
    }
  rep.verdict("E2_matches_block_tensor_formula", e2_ok);
  return rep;
}

Report pipeline_sps(const ModelSpec& m) {
  Report rep;
  rep.command = "pipeline-sps";
  require(m.assumption12, "pipeline-sps requires the semidirect-product flag");
  Bicomplex ambient = untwisted_ambient(m);
  PageStack amb_stack = pages_direct(ambient);
  int r_n = amb_stack.degeneracy;
  Bicomplex b = build_semidirect_model(m);
  PageStack b_direct = pages_direct(b);
  PageStack b_iter = pages_iterative(b);
  int r_g = b_direct.degeneracy;
  rep.put("rstep_nilfactor", static_cast<long>(r_n));
  rep.put("rstep_model", static_cast<long>(r_g));
  rep.verdict("dual_page_algorithms_agree", stacks_agree(b_direct, b_iter));
  rep.verdict("degeneracy_bound", r_g <= std::max(2, r_n),
              "r(G) = " + std::to_string(r_g) + ", r(N) = " + std::to_string(r_n));
  WeightSplit split = split_trivial_weight(m);
  rep.merge(split.report, "");
  // Page-level injections of the weight-trivial part into the ambient.
  PageMapReport pm = induced_page_maps(split.trivial_part, ambient);
  rep.verdict("page_maps_injective", pm.all_injective);
  rep.verdict("page_algebras_pd_type", pm.all_pd);
  return rep;
}

Report euler_checks(const std::vector<std::vector<int>>& h,
                    const std::vector<int>& betti, int n) {
  Report rep;
  rep.command = "euler";
  long chi = 0;
  for (size_t k = 0; k < betti.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * betti[k];
  rep.verdict("euler_characteristic_zero", chi == 0, "chi = " + std::to_string(chi));
  bool cols_ok = true;
  for (int p = 0; p <= n; ++p) {
    long s = 0;
    for (int q = 0; q <= n; ++q) s += (q % 2 == 0 ? 1 : -1) * h[p][q];
    if (s != 0) cols_ok = false;
  }
  rep.verdict("column_alternating_sums_zero", cols_ok);
  bool poincare = true;
  for (size_t k = 0; k < betti.size(); ++k)
    if (betti[k] != betti[betti.size() - 1 - k]) poincare = false;
  rep.verdict("poincare_duality", poincare);
  bool serre = true;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q)
      if (h[p][q] != h[n - p][n - q]) serre = false;
  rep.verdict("serre_duality", serre);
  return rep;
}

std::vector<std::vector<int>> dolbeault_table(const Bicomplex& b) {
  std::vector<std::vector<int>> h(b.pmax + 1, std::vector<int>(b.qmax + 1, 0));
  for (int p = 0; p <= b.pmax; ++p) {
    Cohomology c = cohomology_ranks(column_complex(b, p));
    for (int q = 0; q <= b.qmax; ++q) h[p][q] = c.dims[q];
  }
  return h;
}

std::vector<std::vector<std::vector<Vec>>> dolbeault_reps(const Bicomplex& b) {
  std::vector<std::vector<std::vector<Vec>>> reps(b.pmax + 1);
  for (int p = 0; p <= b.pmax; ++p) {
    Cohomology c = cohomology_ranks(column_complex(b, p));
    reps[p] = c.reps;
  }
  return reps;
}

}  // namespace fss
