#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "fss/model.hpp"

namespace fss {

// Exterior monomials are bitmasks over the global generator order (declared
// generators first, then their conjugates). At most 32 generators.
using Mask = std::uint32_t;

int mask_degree(Mask m);
std::vector<int> mask_bits(Mask m);
// Sign of sorting the concatenation (sorted a, sorted b) into one sorted
// monomial; 0 when the masks overlap.
int merge_sign(Mask a, Mask b);
// Position sign (-1)^(k-1) for the k-th generator of m (1-based rank of g).
int position_sign(Mask m, int g);
// Lexicographic order on the increasing index sequences (paper-style listing
// order, used for canonical cell bases).
bool mask_lex_less(Mask a, Mask b);

// A basis element: character prefactor times an exterior monomial.
struct TwistedElement {
  CharExpr pre;
  Mask mono = 0;

  friend bool operator==(const TwistedElement&, const TwistedElement&) = default;
};

bool element_less(const TwistedElement& a, const TwistedElement& b);

struct Term {
  Scalar c;
  TwistedElement e;
};

// Sorted, combined, zero-free linear combination of basis elements.
using Expansion = std::vector<Term>;

void add_term(Expansion& acc, const Scalar& c, const TwistedElement& e);
Expansion& combine(Expansion& acc);

// p = number of (1,0) generators in the monomial, q = number of (0,1).
std::pair<int, int> bidegree(const ModelSpec& m, Mask mono);
CharExpr action_char(const ModelSpec& m, Mask mono);

// Wedge product; zero expansion when a generator repeats. Prefactors add.
Expansion wedge(const TwistedElement& a, const TwistedElement& b);

// Complex conjugate (antilinear on coefficients, applied termwise).
Term conj_element(const ModelSpec& m, const TwistedElement& e);
Expansion conj_expansion(const ModelSpec& m, const Expansion& x);

// Full differential d = del10 + del01 of a twisted element:
//   d(tau * m) = tau * ( dlog10(tau) ^ m + dlog01(tau) ^ m + d_CE m )
// where d_CE is the Leibniz extension of the generator differentials.
Expansion differential(const ModelSpec& m, const TwistedElement& e);
// The two bidegree components of the differential.
Expansion del10(const ModelSpec& m, const TwistedElement& e);
Expansion del01(const ModelSpec& m, const TwistedElement& e);

std::string element_str(const ModelSpec& m, const TwistedElement& e);
std::string expansion_str(const ModelSpec& m, const Expansion& x);

}  // namespace fss
