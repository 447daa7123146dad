#include "fss/element.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace fss {

int mask_degree(Mask m) { return std::popcount(m); }

std::vector<int> mask_bits(Mask m) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (m & (Mask{1} << i)) out.push_back(i);
  return out;
}

int merge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inversions = 0;
  for (int j = 0; j < 32; ++j) {
    if (!(b & (Mask{1} << j))) continue;
    Mask above = (j == 31) ? 0 : (a >> (j + 1));
    inversions += std::popcount(above);
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

int position_sign(Mask m, int g) {
  Mask below = m & ((Mask{1} << g) - 1);
  return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

bool mask_lex_less(Mask a, Mask b) {
  if (a == b) return false;
  // Compare increasing index sequences lexicographically; shorter prefix wins.
  while (a && b) {
    int ia = std::countr_zero(a);
    int ib = std::countr_zero(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0;
}

bool element_less(const TwistedElement& a, const TwistedElement& b) {
  if (a.mono != b.mono) return mask_lex_less(a.mono, b.mono);
  return a.pre < b.pre;
}

void add_term(Expansion& acc, const Scalar& c, const TwistedElement& e) {
  if (c.is_zero()) return;
  acc.push_back(Term{c, e});
}

Expansion& combine(Expansion& acc) {
  std::sort(acc.begin(), acc.end(), [](const Term& x, const Term& y) {
    return element_less(x.e, y.e);
  });
  Expansion out;
  for (auto& t : acc) {
    if (!out.empty() && out.back().e == t.e) {
      out.back().c += t.c;
      if (out.back().c.is_zero()) out.pop_back();
    } else if (!t.c.is_zero()) {
      out.push_back(std::move(t));
    }
  }
  acc = std::move(out);
  return acc;
}

std::pair<int, int> bidegree(const ModelSpec& m, Mask mono) {
  int p = 0, q = 0;
  for (int g : mask_bits(mono)) (m.gens[g].anti ? q : p)++;
  return {p, q};
}

CharExpr action_char(const ModelSpec& m, Mask mono) {
  CharExpr e = expr_zero(m.n_bases());
  for (int g : mask_bits(mono)) e = expr_add(e, m.gens[g].action);
  return e;
}

Expansion wedge(const TwistedElement& a, const TwistedElement& b) {
  Expansion out;
  int s = merge_sign(a.mono, b.mono);
  if (s == 0) return out;
  add_term(out, Scalar(s), TwistedElement{expr_add(a.pre, b.pre), a.mono | b.mono});
  return out;
}

Term conj_element(const ModelSpec& m, const TwistedElement& e) {
  std::vector<int> mapped;
  for (int g : mask_bits(e.mono)) mapped.push_back(m.gens[g].conj_gen);
  // Permutation sign of sorting the mapped index sequence.
  int inv = 0;
  for (size_t i = 0; i < mapped.size(); ++i)
    for (size_t j = i + 1; j < mapped.size(); ++j)
      if (mapped[i] > mapped[j]) ++inv;
  Mask mono = 0;
  for (int g : mapped) mono |= Mask{1} << g;
  ensure(mask_degree(mono) == static_cast<int>(mapped.size()), "conjugation collision");
  return Term{Scalar(inv % 2 == 0 ? 1 : -1), TwistedElement{m.conj_expr(e.pre), mono}};
}

Expansion conj_expansion(const ModelSpec& m, const Expansion& x) {
  Expansion out;
  for (const auto& t : x) {
    Term ct = conj_element(m, t.e);
    add_term(out, t.c.conj() * ct.c, ct.e);
  }
  return combine(out);
}

namespace {

// Leibniz differential of the monomial part (structure constants only).
void ce_part(const ModelSpec& m, const TwistedElement& e, Expansion& out) {
  for (int g : mask_bits(e.mono)) {
    Mask rest = e.mono & ~(Mask{1} << g);
    int psign = position_sign(e.mono, g);
    for (const DiffTerm& t : m.gens[g].differential) {
      Mask pair = (Mask{1} << t.g1) | (Mask{1} << t.g2);
      int s = merge_sign(pair, rest);
      if (s == 0) continue;
      add_term(out, Scalar(psign * s) * t.coeff, TwistedElement{e.pre, pair | rest});
    }
  }
}

// dlog(prefactor) wedge monomial.
void dlog_part(const ModelSpec& m, const TwistedElement& e, const Vec& dlog,
               Expansion& out) {
  for (int g = 0; g < m.n_gens(); ++g) {
    if (dlog[g].is_zero()) continue;
    Mask bit = Mask{1} << g;
    if (e.mono & bit) continue;
    int s = merge_sign(bit, e.mono);
    add_term(out, Scalar(s) * dlog[g], TwistedElement{e.pre, bit | e.mono});
  }
}

}  // namespace

Expansion differential(const ModelSpec& m, const TwistedElement& e) {
  Expansion out;
  dlog_part(m, e, m.dlog10_of(e.pre), out);
  dlog_part(m, e, m.dlog01_of(e.pre), out);
  ce_part(m, e, out);
  return combine(out);
}

namespace {

Expansion bidegree_component(const ModelSpec& m, const Expansion& x, int dp) {
  Expansion out;
  for (const auto& t : x) {
    auto [p, q] = bidegree(m, t.e.mono);
    (void)q;
    if (p == dp) out.push_back(t);
  }
  return out;
}

}  // namespace

Expansion del10(const ModelSpec& m, const TwistedElement& e) {
  auto [p, q] = bidegree(m, e.mono);
  (void)q;
  return bidegree_component(m, differential(m, e), p + 1);
}

Expansion del01(const ModelSpec& m, const TwistedElement& e) {
  auto [p, q] = bidegree(m, e.mono);
  (void)q;
  return bidegree_component(m, differential(m, e), p);
}

std::string element_str(const ModelSpec& m, const TwistedElement& e) {
  std::ostringstream os;
  std::string pre;
  if (!expr_is_zero(e.pre)) {
    std::vector<std::string> names;
    for (const auto& b : m.bases) names.push_back(b.name);
    pre = expr_str(e.pre, names);
  }
  std::string mono;
  for (int g : mask_bits(e.mono)) {
    if (!mono.empty()) mono += "^";
    mono += m.gen_display(g);
  }
  if (mono.empty()) mono = "1";
  if (!pre.empty()) os << pre << "." << mono;
  else os << mono;
  return os.str();
}

std::string expansion_str(const ModelSpec& m, const Expansion& x) {
  if (x.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : x) {
    std::string c = t.c.str();
    if (!first) os << " + ";
    if (c != "1") os << "(" << c << ")*";
    os << element_str(m, t.e);
    first = false;
  }
  return os.str();
}

}  // namespace fss
