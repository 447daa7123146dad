#pragma once

#include <gmpxx.h>
#include <iosfwd>
#include <string>

namespace fss {

// Gaussian rational a + b*i with arbitrary-precision rational parts.
// All arithmetic is exact; values are kept in canonical reduced form
// (gcd(num, den) = 1, den > 0 for both parts).
struct Scalar {
  mpq_class re, im;

  Scalar() : re(0), im(0) {}
  Scalar(long n) : re(n), im(0) {}
  Scalar(long num, long den) : re(num, den), im(0) { re.canonicalize(); }
  Scalar(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  static Scalar i() { return Scalar(mpq_class(0), mpq_class(1)); }
  static Scalar rational(long num, long den) { return Scalar(num, den); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }

  Scalar conj() const { return Scalar(re, -im); }

  // |z|^2 = a^2 + b^2, a rational.
  mpq_class norm2() const { return re * re + im * im; }

  Scalar operator-() const { return Scalar(-re, -im); }

  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    mpq_class r = re * o.re - im * o.im;
    mpq_class i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // Total order used only for canonical sorting of output.
  friend bool operator<(const Scalar& a, const Scalar& b) {
    int c = cmp(a.re, b.re);
    if (c != 0) return c < 0;
    return cmp(a.im, b.im) < 0;
  }

  Scalar inverse() const;

  // Canonical text form: "0", "3/2", "-i", "1/2+3*i", "1-2/5*i".
  std::string str() const;

  // Parses the literal grammar accepted by model files:
  //   scalar := term (('+'|'-') term)*
  //   term   := rational | rational '*' 'i' | 'i'
  //   rational := ['-'] digits ['/' digits]
  // Throws fss::error on malformed input (e.g. "1//2").
  static Scalar parse(const std::string& text);
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

// User-facing failure (bad input, failed precondition). Internal invariant
// violations use internal_error instead.
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct internal_error : std::logic_error {
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw error(msg);
}

inline void ensure(bool cond, const std::string& msg) {
  if (!cond) throw internal_error(msg);
}

}  // namespace fss
