#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fss/lattice.hpp"
#include "fss/linalg.hpp"
#include "fss/scalar.hpp"

namespace fss {

// Exponent vector over the model's base characters. Multiplication of
// characters is addition of exponent vectors.
using CharExpr = std::vector<long>;

CharExpr expr_zero(int nbases);
CharExpr expr_add(const CharExpr& a, const CharExpr& b);
CharExpr expr_sub(const CharExpr& a, const CharExpr& b);
CharExpr expr_neg(const CharExpr& a);
bool expr_is_zero(const CharExpr& a);
std::string expr_str(const CharExpr& e, const std::vector<std::string>& names);

enum class CharKind { unitary, holomorphic, antiholomorphic, general };

// A named character of the abelian factor, represented by its logarithmic
// derivative: dlog10 lives in the span of (1,0)-generators, dlog01 in the
// span of (0,1)-generators. Characters of a simply connected group are
// determined by this data.
struct BaseCharacter {
  enum class Origin { declared, conj_synth, upart_synth };

  std::string name;
  CharKind kind = CharKind::general;
  Vec dlog10, dlog01;  // indexed by generator id (entries off-type are zero)
  int conj_base = -1;  // conj(this) = bases[conj_base]^conj_sign
  int conj_sign = 1;
  Origin origin = Origin::declared;
  CharExpr beta, gamma;  // unitary parts: alpha*beta^-1 and conj(alpha)*gamma^-1 holomorphic
};

// One quadratic monomial of a generator differential: coeff * g1 ^ g2 with
// g1 < g2 in the global generator order.
struct DiffTerm {
  Scalar coeff;
  int g1 = 0, g2 = 0;
};

struct GeneratorSpec {
  std::string name;
  bool anti = false;  // false: bidegree (1,0); true: bidegree (0,1)
  CharExpr action;    // weight of this direction under the semi-simple action
  std::vector<DiffTerm> differential;
  int conj_gen = -1;
  bool declared = true;  // synthesized conjugates carry false
};

// Structured, unvalidated model description. Produced by the file parser or
// constructed directly in code; build_model turns it into a ModelSpec.
struct InputDiffTerm {
  Scalar coeff{1};
  std::string g1, g2;  // generator names; "c"-prefix refers to the conjugate
};

struct ModelInput {
  struct BaseCharDecl {
    std::string name;
    CharKind kind = CharKind::general;
    std::string dlog10, dlog01;  // linear expressions in generator names
    // Conjugation rule: "" = derive, "self" (real), "self^-1" (unitary), or a
    // partner base name.
    std::string conj;
  };
  struct GeneratorDecl {
    std::string name;
    int p = 1, q = 0;
    std::string action;        // character expression, "" or "1" means trivial
    std::string differential;  // wedge expression, "" means zero
    std::vector<InputDiffTerm> diff_terms;  // used when differential is empty
  };

  std::string name = "model";
  std::vector<BaseCharDecl> base_chars;
  std::vector<std::string> lattice;  // character expressions trivial on the lattice
  std::vector<GeneratorDecl> generators;
  std::map<std::string, Scalar> consts;
  bool complex_parallelizable = false;
  bool assumption12 = false;
  std::vector<std::string> abelian_factor;
};

struct ModelSpec {
  std::string name;
  std::vector<GeneratorSpec> gens;
  std::vector<BaseCharacter> bases;
  IntLattice triviality;  // ambient = bases.size()
  bool complex_parallelizable = false;
  bool assumption12 = false;
  std::vector<int> abelian;  // generator ids of the declared abelian (1,0) factor
  std::map<std::string, Scalar> consts;

  int n_gens() const { return static_cast<int>(gens.size()); }
  int n_bases() const { return static_cast<int>(bases.size()); }

  CharExpr conj_expr(const CharExpr& e) const;
  // dlog of a character expression, as a coefficient vector over generators.
  Vec dlog10_of(const CharExpr& e) const;
  Vec dlog01_of(const CharExpr& e) const;
  // Transport of a generator-coefficient vector along conjugation: coefficient
  // c on generator g becomes conj(c) on conj(g).
  Vec conj_transport(const Vec& v) const;

  bool is_unitary(const CharExpr& e) const;
  bool is_holomorphic(const CharExpr& e) const;
  bool is_trivial_char(const CharExpr& e) const { return expr_is_zero(e); }

  // Unitary parts: beta(e) is the unique unitary character with e*beta^-1
  // holomorphic; gamma(e) the one with conj(e)*gamma^-1 holomorphic.
  CharExpr beta_of(const CharExpr& e) const;
  CharExpr gamma_of(const CharExpr& e) const;

  // Triviality of the character on the lattice group. Non-unitary characters
  // are never trivial on a cocompact lattice. Throws when the answer would
  // depend on an auto-synthesized unitary part the author never declared.
  bool lattice_trivial(const CharExpr& e) const;

  int gen_index(const std::string& name) const;   // -1 when absent
  int base_index(const std::string& name) const;  // -1 when absent
  std::string gen_display(int g) const { return gens[g].name; }
};

ModelSpec build_model(const ModelInput& input);

// Chevalley-Eilenberg differentials from bracket constants of the holomorphic
// Lie algebra: bracket[i][j] = coefficients of [X_i, X_j] over the generators.
// Convention: (d xi)(X,Y) = -xi([X,Y]). Verifies antisymmetry and Jacobi.
std::vector<std::vector<DiffTerm>> ce_differential(
    int n, const std::vector<std::vector<Vec>>& bracket);

// Expression parsing helpers shared by build_model and the model file parser.
std::vector<InputDiffTerm> parse_wedge_expr(const std::string& text,
                                            const std::map<std::string, Scalar>& consts);
std::map<std::string, long> parse_char_expr(const std::string& text);
std::map<std::string, Scalar> parse_linear_expr(const std::string& text,
                                                const std::map<std::string, Scalar>& consts);

}  // namespace fss
