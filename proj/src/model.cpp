#include "fss/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "fss/element.hpp"

namespace fss {

CharExpr expr_zero(int nbases) { return CharExpr(nbases, 0); }

CharExpr expr_add(const CharExpr& a, const CharExpr& b) {
  ensure(a.size() == b.size(), "character expression size mismatch");
  CharExpr r = a;
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

CharExpr expr_sub(const CharExpr& a, const CharExpr& b) {
  ensure(a.size() == b.size(), "character expression size mismatch");
  CharExpr r = a;
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

CharExpr expr_neg(const CharExpr& a) {
  CharExpr r = a;
  for (auto& x : r) x = -x;
  return r;
}

bool expr_is_zero(const CharExpr& a) {
  return std::all_of(a.begin(), a.end(), [](long x) { return x == 0; });
}

std::string expr_str(const CharExpr& e, const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[i];
    if (e[i] != 1) out += "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

// ---------------------------------------------------------------------------
// Expression parsing

namespace {

struct Lexer {
  std::string src;
  size_t i = 0;

  void skip() {
    while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
  }
  bool done() {
    skip();
    return i >= src.size();
  }
  char peek() {
    skip();
    return i < src.size() ? src[i] : '\0';
  }
  bool eat(char c) {
    skip();
    if (i < src.size() && src[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    size_t s = i;
    while (i < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' ||
            src[i] == '~'))
      ++i;
    require(i > s, "expected identifier in '" + src + "' at position " +
                       std::to_string(s));
    return src.substr(s, i - s);
  }
  std::string number() {
    skip();
    size_t s = i;
    while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
    if (i < src.size() && src[i] == '/') {
      ++i;
      require(i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])),
              "malformed rational in '" + src + "'");
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
    }
    return src.substr(s, i - s);
  }
  long integer() {
    skip();
    bool neg = eat('-');
    if (!neg) eat('+');
    require(i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])),
            "expected integer in '" + src + "'");
    long v = 0;
    while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])))
      v = v * 10 + (src[i++] - '0');
    return neg ? -v : v;
  }
};

// Optional scalar coefficient followed by '*'. Returns 1 when absent.
Scalar parse_coefficient(Lexer& lx, const std::map<std::string, Scalar>& consts) {
  lx.skip();
  if (lx.peek() == '(') {
    size_t open = lx.i;
    int depth = 0;
    size_t j = lx.i;
    for (; j < lx.src.size(); ++j) {
      if (lx.src[j] == '(') ++depth;
      if (lx.src[j] == ')' && --depth == 0) break;
    }
    require(j < lx.src.size(), "unbalanced parentheses in '" + lx.src + "'");
    Scalar c = Scalar::parse(lx.src.substr(open + 1, j - open - 1));
    lx.i = j + 1;
    require(lx.eat('*'), "expected '*' after coefficient in '" + lx.src + "'");
    return c;
  }
  if (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
    Scalar c = Scalar::parse(lx.number());
    require(lx.eat('*'), "expected '*' after coefficient in '" + lx.src + "'");
    return c;
  }
  if (std::isalpha(static_cast<unsigned char>(lx.peek())) || lx.peek() == '_') {
    size_t mark = lx.i;
    std::string id = lx.ident();
    if (id == "i") {
      require(lx.eat('*'), "expected '*' after 'i' in '" + lx.src + "'");
      return Scalar::i();
    }
    auto it = consts.find(id);
    if (it != consts.end()) {
      size_t after = lx.i;
      if (lx.eat('*')) return it->second;
      lx.i = after;
    }
    lx.i = mark;  // not a coefficient; treat as generator name
  }
  return Scalar(1);
}

}  // namespace

std::vector<InputDiffTerm> parse_wedge_expr(const std::string& text,
                                            const std::map<std::string, Scalar>& consts) {
  std::vector<InputDiffTerm> terms;
  Lexer lx{text};
  if (lx.done()) return terms;
  bool first = true;
  while (!lx.done()) {
    Scalar sign(1);
    if (lx.eat('-')) sign = Scalar(-1);
    else if (lx.eat('+')) sign = Scalar(1);
    else require(first, "expected '+' or '-' in '" + text + "'");
    first = false;
    Scalar coeff = sign * parse_coefficient(lx, consts);
    std::vector<std::string> gens;
    gens.push_back(lx.ident());
    while (lx.eat('^')) gens.push_back(lx.ident());
    require(gens.size() == 2,
            "differential term must be a wedge of exactly two generators in '" +
                text + "'");
    terms.push_back(InputDiffTerm{coeff, gens[0], gens[1]});
  }
  return terms;
}

std::map<std::string, long> parse_char_expr(const std::string& text) {
  std::map<std::string, long> out;
  Lexer lx{text};
  if (lx.done()) return out;
  if (lx.peek() == '1') {
    lx.eat('1');
    require(lx.done(), "trailing characters after '1' in '" + text + "'");
    return out;
  }
  while (true) {
    std::string name = lx.ident();
    long e = 1;
    if (lx.eat('^')) e = lx.integer();
    out[name] += e;
    if (lx.done()) break;
    require(lx.eat('*'), "expected '*' between factors in '" + text + "'");
  }
  return out;
}

std::map<std::string, Scalar> parse_linear_expr(const std::string& text,
                                                const std::map<std::string, Scalar>& consts) {
  std::map<std::string, Scalar> out;
  Lexer lx{text};
  if (lx.done()) return out;
  bool first = true;
  while (!lx.done()) {
    Scalar sign(1);
    if (lx.eat('-')) sign = Scalar(-1);
    else if (lx.eat('+')) sign = Scalar(1);
    else require(first, "expected '+' or '-' in '" + text + "'");
    first = false;
    Scalar coeff = sign * parse_coefficient(lx, consts);
    std::string name = lx.ident();
    auto [it, fresh] = out.try_emplace(name, Scalar(0));
    (void)fresh;
    it->second += coeff;
  }
  return out;
}

// ---------------------------------------------------------------------------
// ModelSpec helpers

CharExpr ModelSpec::conj_expr(const CharExpr& e) const {
  CharExpr out = expr_zero(n_bases());
  for (int i = 0; i < n_bases(); ++i) {
    if (e[i] == 0) continue;
    out[bases[i].conj_base] += bases[i].conj_sign * e[i];
  }
  return out;
}

Vec ModelSpec::dlog10_of(const CharExpr& e) const {
  Vec v(n_gens());
  for (int i = 0; i < n_bases(); ++i) {
    if (e[i] == 0) continue;
    Scalar k(e[i]);
    for (int g = 0; g < n_gens(); ++g) v[g] += k * bases[i].dlog10[g];
  }
  return v;
}

Vec ModelSpec::dlog01_of(const CharExpr& e) const {
  Vec v(n_gens());
  for (int i = 0; i < n_bases(); ++i) {
    if (e[i] == 0) continue;
    Scalar k(e[i]);
    for (int g = 0; g < n_gens(); ++g) v[g] += k * bases[i].dlog01[g];
  }
  return v;
}

Vec ModelSpec::conj_transport(const Vec& v) const {
  Vec out(n_gens());
  for (int g = 0; g < n_gens(); ++g) {
    if (v[g].is_zero()) continue;
    out[gens[g].conj_gen] = v[g].conj();
  }
  return out;
}

bool ModelSpec::is_unitary(const CharExpr& e) const {
  Vec lhs = dlog01_of(e);
  Vec rhs = conj_transport(dlog10_of(e));
  for (int g = 0; g < n_gens(); ++g)
    if (lhs[g] != -rhs[g]) return false;
  return true;
}

bool ModelSpec::is_holomorphic(const CharExpr& e) const {
  return fss::is_zero(dlog01_of(e));
}

CharExpr ModelSpec::beta_of(const CharExpr& e) const {
  CharExpr out = expr_zero(n_bases());
  for (int i = 0; i < n_bases(); ++i) {
    if (e[i] == 0) continue;
    for (int j = 0; j < n_bases(); ++j) out[j] += e[i] * bases[i].beta[j];
  }
  return out;
}

CharExpr ModelSpec::gamma_of(const CharExpr& e) const {
  CharExpr out = expr_zero(n_bases());
  for (int i = 0; i < n_bases(); ++i) {
    if (e[i] == 0) continue;
    for (int j = 0; j < n_bases(); ++j) out[j] += e[i] * bases[i].gamma[j];
  }
  return out;
}

bool ModelSpec::lattice_trivial(const CharExpr& e) const {
  if (expr_is_zero(e)) return true;
  if (!is_unitary(e)) return false;  // never trivial on a cocompact lattice
  for (int i = 0; i < n_bases(); ++i) {
    if (e[i] != 0 && bases[i].origin == BaseCharacter::Origin::upart_synth) {
      std::vector<std::string> names;
      for (const auto& b : bases) names.push_back(b.name);
      throw error("triviality lattice does not cover the character " +
                  expr_str(e, names) +
                  "; declare its unitary part as a base character");
    }
  }
  IntVec v;
  v.reserve(e.size());
  for (long x : e) v.emplace_back(x);
  return triviality.contains(v);
}

int ModelSpec::gen_index(const std::string& name) const {
  for (int g = 0; g < n_gens(); ++g)
    if (gens[g].name == name) return g;
  return -1;
}

int ModelSpec::base_index(const std::string& name) const {
  for (int b = 0; b < n_bases(); ++b)
    if (bases[b].name == name) return b;
  return -1;
}

// ---------------------------------------------------------------------------
// build_model

namespace {

// Realified dlog data of one base character: (re, im) pairs of both forms.
Vec realify_dlogs(const Vec& d10, const Vec& d01) {
  Vec out;
  out.reserve(2 * (d10.size() + d01.size()));
  for (const auto& x : d10) {
    out.push_back(Scalar(mpq_class(x.re), mpq_class(0)));
    out.push_back(Scalar(mpq_class(x.im), mpq_class(0)));
  }
  for (const auto& x : d01) {
    out.push_back(Scalar(mpq_class(x.re), mpq_class(0)));
    out.push_back(Scalar(mpq_class(x.im), mpq_class(0)));
  }
  return out;
}

// Solve for integer exponents k with sum_i k_i * dlog(base_i) = target.
std::optional<CharExpr> integer_combination(const ModelSpec& spec, const Vec& t10,
                                            const Vec& t01) {
  int nb = spec.n_bases();
  if (nb == 0) return std::nullopt;
  Vec target = realify_dlogs(t10, t01);
  Matrix m(static_cast<int>(target.size()), nb);
  for (int b = 0; b < nb; ++b) {
    Vec col = realify_dlogs(spec.bases[b].dlog10, spec.bases[b].dlog01);
    for (size_t r = 0; r < col.size(); ++r) m.at(static_cast<int>(r), b) = col[r];
  }
  auto x = solve(m, target);
  if (!x) return std::nullopt;
  CharExpr e = expr_zero(nb);
  for (int b = 0; b < nb; ++b) {
    const Scalar& v = (*x)[b];
    if (!v.is_zero() && (v.re.get_den() != 1 || sgn(v.im) != 0)) return std::nullopt;
    e[b] = static_cast<long>(v.re.get_num().get_si());
    if (mpz_class(e[b]) != v.re.get_num()) return std::nullopt;
  }
  return e;
}

std::string kind_name(CharKind k) {
  switch (k) {
    case CharKind::unitary: return "unitary";
    case CharKind::holomorphic: return "holomorphic";
    case CharKind::antiholomorphic: return "antiholomorphic";
    case CharKind::general: return "general";
  }
  return "?";
}

// Free-exterior-algebra check that d(d g) = 0 for every generator.
void check_d_squared(const ModelSpec& spec) {
  for (int g = 0; g < spec.n_gens(); ++g) {
    std::map<Mask, Scalar> acc;
    for (const DiffTerm& t : spec.gens[g].differential) {
      // d(a ^ b) = da ^ b - a ^ db
      for (const DiffTerm& u : spec.gens[t.g1].differential) {
        Mask pair = (Mask{1} << u.g1) | (Mask{1} << u.g2);
        Mask rest = Mask{1} << t.g2;
        int s = merge_sign(pair, rest);
        if (s != 0) acc[pair | rest] += Scalar(s) * t.coeff * u.coeff;
      }
      for (const DiffTerm& u : spec.gens[t.g2].differential) {
        Mask pair = (Mask{1} << u.g1) | (Mask{1} << u.g2);
        Mask rest = Mask{1} << t.g1;
        int s = merge_sign(rest, pair);
        if (s != 0) acc[rest | pair] -= Scalar(s) * t.coeff * u.coeff;
      }
    }
    for (const auto& [mask, c] : acc) {
      (void)mask;
      require(c.is_zero(), "d∘d != 0 on generator " + spec.gens[g].name);
    }
  }
}

}  // namespace

ModelSpec build_model(const ModelInput& input) {
  ModelSpec spec;
  spec.name = input.name;
  spec.complex_parallelizable = input.complex_parallelizable;
  spec.assumption12 = input.assumption12;
  spec.consts = input.consts;

  // --- generators: declared block, then conjugates named "c"+name
  int nd = static_cast<int>(input.generators.size());
  require(2 * nd <= 32, "too many generators (limit 16 declared)");
  for (int g = 0; g < nd; ++g) {
    const auto& decl = input.generators[g];
    require(!decl.name.empty() && decl.name != "i", "invalid generator name");
    require((decl.p == 1 && decl.q == 0) || (decl.p == 0 && decl.q == 1),
            "generator " + decl.name + ": bidegree must be (1,0) or (0,1)");
    GeneratorSpec gs;
    gs.name = decl.name;
    gs.anti = decl.q == 1;
    gs.conj_gen = nd + g;
    gs.declared = true;
    spec.gens.push_back(gs);
  }
  for (int g = 0; g < nd; ++g) {
    GeneratorSpec gs;
    gs.name = "c" + spec.gens[g].name;
    gs.anti = !spec.gens[g].anti;
    gs.conj_gen = g;
    gs.declared = false;
    spec.gens.push_back(gs);
  }
  for (int g = 0; g < spec.n_gens(); ++g)
    for (int h = g + 1; h < spec.n_gens(); ++h)
      require(spec.gens[g].name != spec.gens[h].name,
              "generator name collision: " + spec.gens[g].name);

  // --- base characters: declared, then synthesized conjugation partners
  for (const auto& decl : input.base_chars) {
    require(!decl.name.empty() && decl.name != "i", "invalid base character name");
    require(spec.gen_index(decl.name) < 0,
            "base character name collides with generator: " + decl.name);
    BaseCharacter b;
    b.name = decl.name;
    b.kind = decl.kind;
    b.origin = BaseCharacter::Origin::declared;
    spec.bases.push_back(b);
  }
  int ndecl_bases = static_cast<int>(spec.bases.size());
  for (int i = 0; i < ndecl_bases; ++i)
    for (int j = i + 1; j < ndecl_bases; ++j)
      require(spec.bases[i].name != spec.bases[j].name,
              "duplicate base character: " + spec.bases[i].name);

  // Resolve conjugation rules; synthesize missing partners.
  for (int i = 0; i < ndecl_bases; ++i) {
    const auto& decl = input.base_chars[i];
    std::string rule = decl.conj;
    if (rule.empty() && decl.kind == CharKind::unitary) rule = "self^-1";
    if (rule == "self") {
      spec.bases[i].conj_base = i;
      spec.bases[i].conj_sign = 1;
    } else if (rule == "self^-1") {
      spec.bases[i].conj_base = i;
      spec.bases[i].conj_sign = -1;
    } else if (!rule.empty()) {
      int j = -1;
      for (int k = 0; k < ndecl_bases; ++k)
        if (spec.bases[k].name == rule) j = k;
      require(j >= 0, "unknown conjugate base character '" + rule + "' for " +
                          decl.name);
      spec.bases[i].conj_base = j;
      spec.bases[i].conj_sign = 1;
    }
  }
  for (int i = 0; i < ndecl_bases; ++i) {
    if (spec.bases[i].conj_base >= 0) continue;
    // Synthesize the conjugate partner.
    BaseCharacter b;
    b.name = spec.bases[i].name + "~";
    switch (spec.bases[i].kind) {
      case CharKind::holomorphic: b.kind = CharKind::antiholomorphic; break;
      case CharKind::antiholomorphic: b.kind = CharKind::holomorphic; break;
      default: b.kind = CharKind::general; break;
    }
    b.origin = BaseCharacter::Origin::conj_synth;
    int j = static_cast<int>(spec.bases.size());
    b.conj_base = i;
    b.conj_sign = 1;
    spec.bases.push_back(b);
    spec.bases[i].conj_base = j;
    spec.bases[i].conj_sign = 1;
  }
  for (int i = 0; i < spec.n_bases(); ++i) {
    int j = spec.bases[i].conj_base;
    require(spec.bases[j].conj_base == i &&
                spec.bases[j].conj_sign == spec.bases[i].conj_sign,
            "conjugation is not an involution on base characters (" +
                spec.bases[i].name + ")");
  }

  int nb0 = spec.n_bases();

  // --- generator actions and differentials
  auto resolve_action = [&](const std::string& text) {
    CharExpr e = expr_zero(nb0);
    for (const auto& [name, exp] : parse_char_expr(text)) {
      int b = spec.base_index(name);
      require(b >= 0, "unknown base character '" + name + "' in action '" + text + "'");
      e[b] += exp;
    }
    return e;
  };
  auto resolve_gen = [&](const std::string& name) {
    int g = spec.gen_index(name);
    require(g >= 0, "unknown generator '" + name + "'");
    return g;
  };
  for (int g = 0; g < nd; ++g) {
    const auto& decl = input.generators[g];
    spec.gens[g].action = resolve_action(decl.action);
    std::vector<InputDiffTerm> terms = decl.diff_terms;
    if (!decl.differential.empty())
      terms = parse_wedge_expr(decl.differential, input.consts);
    for (const auto& t : terms) {
      int a = resolve_gen(t.g1), b = resolve_gen(t.g2);
      require(a != b, "repeated generator in differential of " + decl.name);
      Scalar c = t.coeff;
      if (a > b) {
        std::swap(a, b);
        c = -c;
      }
      spec.gens[g].differential.push_back(DiffTerm{c, a, b});
    }
  }
  // Conjugate generators: action and differential by conjugation.
  for (int g = 0; g < nd; ++g) {
    int cg = nd + g;
    spec.gens[cg].action = spec.conj_expr(spec.gens[g].action);
    for (const DiffTerm& t : spec.gens[g].differential) {
      int a = spec.gens[t.g1].conj_gen, b = spec.gens[t.g2].conj_gen;
      Scalar c = t.coeff.conj();
      if (a > b) {
        std::swap(a, b);
        c = -c;
      }
      spec.gens[cg].differential.push_back(DiffTerm{c, a, b});
    }
  }

  // --- dlog data
  std::vector<bool> closed(spec.n_gens());
  for (int g = 0; g < spec.n_gens(); ++g)
    closed[g] = spec.gens[g].differential.empty();
  auto resolve_dlog = [&](const std::string& text, bool holo_part,
                          const std::string& who) {
    Vec v(spec.n_gens());
    for (const auto& [name, coeff] : parse_linear_expr(text, input.consts)) {
      int g = resolve_gen(name);
      require(spec.gens[g].anti != holo_part,
              "dlog" + std::string(holo_part ? "10" : "01") + " of " + who +
                  " must use " + (holo_part ? "(1,0)" : "(0,1)") + " generators");
      require(closed[g] && expr_is_zero(spec.gens[g].action),
              "dlog of " + who +
                  " must be supported on closed generators with trivial action (" +
                  spec.gens[g].name + ")");
      v[g] = coeff;
    }
    return v;
  };
  for (int i = 0; i < ndecl_bases; ++i) {
    const auto& decl = input.base_chars[i];
    spec.bases[i].dlog10 = resolve_dlog(decl.dlog10, true, decl.name);
    spec.bases[i].dlog01 = resolve_dlog(decl.dlog01, false, decl.name);
    if (decl.kind == CharKind::unitary && decl.dlog01.empty())
      spec.bases[i].dlog01 = scale(Scalar(-1), spec.conj_transport(spec.bases[i].dlog10));
  }
  for (int i = ndecl_bases; i < nb0; ++i) {
    int j = spec.bases[i].conj_base;  // synthesized partner of a declared base
    spec.bases[i].dlog10 = spec.conj_transport(spec.bases[j].dlog01);
    spec.bases[i].dlog01 = spec.conj_transport(spec.bases[j].dlog10);
  }

  // --- base character validation
  for (int i = 0; i < nb0; ++i) {
    BaseCharacter& b = spec.bases[i];
    require(!is_zero(b.dlog10) || !is_zero(b.dlog01),
            "base character " + b.name + " has zero dlog (trivial character)");
    bool h10 = is_zero(b.dlog01), h01 = is_zero(b.dlog10);
    Vec unit = scale(Scalar(-1), spec.conj_transport(b.dlog10));
    bool uni = b.dlog01 == unit;
    switch (b.kind) {
      case CharKind::unitary:
        require(uni, "base character " + b.name +
                         " declared unitary but dlog01 != -conj(dlog10)");
        break;
      case CharKind::holomorphic:
        require(h10, "base character " + b.name + " declared holomorphic but dlog01 != 0");
        break;
      case CharKind::antiholomorphic:
        require(h01, "base character " + b.name +
                         " declared antiholomorphic but dlog10 != 0");
        break;
      case CharKind::general:
        // normalize the kind when the data is special
        if (uni) b.kind = CharKind::unitary;
        else if (h10) b.kind = CharKind::holomorphic;
        else if (h01) b.kind = CharKind::antiholomorphic;
        break;
    }
    int j = b.conj_base;
    Vec want10 = spec.conj_transport(b.dlog01);
    Vec want01 = spec.conj_transport(b.dlog10);
    Vec have10 = scale(Scalar(b.conj_sign), spec.bases[j].dlog10);
    Vec have01 = scale(Scalar(b.conj_sign), spec.bases[j].dlog01);
    require(want10 == have10 && want01 == have01,
            "conjugation rule of base character " + b.name +
                " is inconsistent with its dlog data");
  }

  // --- generator validation
  for (int g = 0; g < spec.n_gens(); ++g) {
    const GeneratorSpec& gs = spec.gens[g];
    for (const DiffTerm& t : gs.differential) {
      CharExpr total = expr_add(spec.gens[t.g1].action, spec.gens[t.g2].action);
      if (total != gs.action) {
        std::vector<std::string> names;
        for (const auto& b : spec.bases) names.push_back(b.name);
        throw error("differential of " + gs.name +
                    " is not action-homogeneous: term " + spec.gens[t.g1].name +
                    "^" + spec.gens[t.g2].name + " has character " +
                    expr_str(total, names) + " but the generator has " +
                    expr_str(gs.action, names));
      }
    }
  }
  check_d_squared(spec);
  if (spec.complex_parallelizable) {
    for (int g = 0; g < spec.n_gens(); ++g) {
      const GeneratorSpec& gs = spec.gens[g];
      if (gs.anti) continue;
      require(spec.is_holomorphic(gs.action) &&
                  expr_is_zero(expr_sub(gs.action, spec.conj_expr(spec.conj_expr(gs.action)))),
              "complex-parallelizable model requires holomorphic action characters (" +
                  gs.name + ")");
      for (const DiffTerm& t : gs.differential)
        require(!spec.gens[t.g1].anti && !spec.gens[t.g2].anti,
                "complex-parallelizable model requires type (2,0) differentials (" +
                    gs.name + ")");
    }
  }

  // --- abelian factor
  for (const auto& name : input.abelian_factor) {
    int g = spec.gen_index(name);
    require(g >= 0 && g < nd, "abelian factor generator not declared: " + name);
    require(!spec.gens[g].anti, "abelian factor generator must have bidegree (1,0): " + name);
    require(closed[g], "abelian factor generator must be closed: " + name);
    require(expr_is_zero(spec.gens[g].action),
            "abelian factor generator must have trivial action: " + name);
    spec.abelian.push_back(g);
  }

  // --- multiplicative independence of base characters
  if (nb0 > 0) {
    Matrix m(4 * spec.n_gens(), nb0);
    for (int b = 0; b < nb0; ++b) {
      Vec col = realify_dlogs(spec.bases[b].dlog10, spec.bases[b].dlog01);
      for (size_t r = 0; r < col.size(); ++r) m.at(static_cast<int>(r), b) = col[r];
    }
    require(rank(m) == nb0,
            "base characters are multiplicatively dependent; declare an independent set");
  }

  // --- unitary parts beta, gamma for every base character
  auto compute_parts = [&](int i) {
    BaseCharacter& b = spec.bases[i];
    int nb = spec.n_bases();
    CharExpr self = expr_zero(nb);
    self[i] = 1;
    CharExpr cj = expr_zero(nb);
    cj[b.conj_base] = b.conj_sign;
    switch (b.kind) {
      case CharKind::unitary:
        b.beta = self;
        b.gamma = expr_neg(self);
        return;
      case CharKind::holomorphic:
        b.beta = expr_zero(nb);
        b.gamma = expr_sub(cj, self);
        return;
      case CharKind::antiholomorphic:
        b.beta = expr_sub(self, cj);
        b.gamma = expr_zero(nb);
        return;
      case CharKind::general: break;
    }
    // beta: dlog10 = -conj(dlog01), dlog01 = dlog01; gamma likewise.
    Vec b10 = scale(Scalar(-1), spec.conj_transport(b.dlog01));
    Vec b01 = b.dlog01;
    Vec g10 = scale(Scalar(-1), b.dlog10);
    Vec g01 = spec.conj_transport(b.dlog10);
    auto find_or_synth = [&](const Vec& t10, const Vec& t01, const std::string& tag) {
      auto k = integer_combination(spec, t10, t01);
      if (k) return *k;
      BaseCharacter nu;
      nu.name = tag + "(" + b.name + ")";
      nu.kind = CharKind::unitary;
      nu.dlog10 = t10;
      nu.dlog01 = t01;
      nu.origin = BaseCharacter::Origin::upart_synth;
      int idx = spec.n_bases();
      nu.conj_base = idx;
      nu.conj_sign = -1;
      nu.beta = expr_zero(idx + 1);
      nu.beta[idx] = 1;
      nu.gamma = expr_neg(nu.beta);
      spec.bases.push_back(nu);
      CharExpr e = expr_zero(spec.n_bases());
      e[idx] = 1;
      return e;
    };
    CharExpr beta = find_or_synth(b10, b01, "u");
    CharExpr gamma = find_or_synth(g10, g01, "v");
    beta.resize(spec.n_bases(), 0);
    gamma.resize(spec.n_bases(), 0);
    spec.bases[i].beta = beta;
    spec.bases[i].gamma = gamma;
  };
  for (int i = 0; i < nb0; ++i) compute_parts(i);
  // Normalize expression widths after any synthesis.
  int nb = spec.n_bases();
  for (auto& b : spec.bases) {
    b.beta.resize(nb, 0);
    b.gamma.resize(nb, 0);
  }
  for (auto& g : spec.gens) g.action.resize(nb, 0);

  // Check: beta and gamma really are unitary with holomorphic quotients.
  for (int i = 0; i < nb0; ++i) {
    const BaseCharacter& b = spec.bases[i];
    CharExpr self = expr_zero(nb);
    self[i] = 1;
    ensure(spec.is_unitary(b.beta) && spec.is_unitary(b.gamma),
           "unitary part synthesis failed for " + b.name);
    ensure(spec.is_holomorphic(expr_sub(self, b.beta)),
           "alpha*beta^-1 not holomorphic for " + b.name);
    ensure(spec.is_holomorphic(expr_sub(spec.conj_expr(self), b.gamma)),
           "conj(alpha)*gamma^-1 not holomorphic for " + b.name);
  }

  // --- triviality lattice
  std::vector<IntVec> lat_gens;
  for (const auto& text : input.lattice) {
    CharExpr e = expr_zero(nb);
    for (const auto& [name, exp] : parse_char_expr(text)) {
      int b = spec.base_index(name);
      require(b >= 0, "unknown base character '" + name + "' in lattice entry '" +
                          text + "'");
      e[b] += exp;
    }
    require(spec.is_unitary(e),
            "lattice entry '" + text +
                "' is not unitary; only unitary characters can restrict trivially");
    IntVec v;
    for (long x : e) v.emplace_back(x);
    lat_gens.push_back(v);
  }
  spec.triviality = IntLattice::from_generators(nb, lat_gens);
  // Conjugation stability: conj of a trivial character is trivial.
  for (const auto& text : input.lattice) {
    CharExpr e = expr_zero(nb);
    for (const auto& [name, exp] : parse_char_expr(text)) e[spec.base_index(name)] += exp;
    CharExpr ce = spec.conj_expr(e);
    IntVec v;
    for (long x : ce) v.emplace_back(x);
    require(spec.triviality.contains(v),
            "triviality lattice is not conjugation-stable (entry '" + text + "')");
  }

  return spec;
}

std::vector<std::vector<DiffTerm>> ce_differential(
    int n, const std::vector<std::vector<Vec>>& bracket) {
  require(static_cast<int>(bracket.size()) == n, "bracket table size mismatch");
  for (const auto& row : bracket)
    require(static_cast<int>(row.size()) == n, "bracket table size mismatch");
  auto coeff = [&](int i, int j, int k) -> Scalar {
    ensure(static_cast<int>(bracket[i][j].size()) == n, "bracket vector size");
    return bracket[i][j][k];
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        require(coeff(i, j, k) == -coeff(j, i, k), "bracket table is not antisymmetric");
  // Jacobi: [[Xi,Xj],Xk] + [[Xj,Xk],Xi] + [[Xk,Xi],Xj] = 0.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          Scalar s;
          for (int l = 0; l < n; ++l) {
            s += coeff(i, j, l) * coeff(l, k, m);
            s += coeff(j, k, l) * coeff(l, i, m);
            s += coeff(k, i, l) * coeff(l, j, m);
          }
          require(s.is_zero(), "bracket table violates the Jacobi identity");
        }
  // (d xi^k)(Xi, Xj) = -xi^k([Xi,Xj]) = -c^k_ij, so d xi^k = -sum_{i<j} c^k_ij xi^i ^ xi^j.
  std::vector<std::vector<DiffTerm>> out(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Scalar c = -coeff(i, j, k);
        if (!c.is_zero()) out[k].push_back(DiffTerm{c, i, j});
      }
  return out;
}

}  // namespace fss
