#include "fss/scalar.hpp"

#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fss {

Scalar Scalar::inverse() const {
  require(!is_zero(), "division by zero scalar");
  mpq_class n2 = norm2();
  return Scalar(re / n2, -im / n2);
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

namespace {

std::string rat_str(const mpq_class& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

}  // namespace

std::string Scalar::str() const {
  if (is_zero()) return "0";
  std::string out;
  if (sgn(re) != 0) out = rat_str(re);
  if (sgn(im) != 0) {
    if (!out.empty() && sgn(im) > 0) out += "+";
    if (im == 1) {
      out += "i";
    } else if (im == -1) {
      out += "-i";
    } else {
      out += rat_str(im) + "*i";
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  bool done() const { return i >= s.size(); }
  char peek() const { return done() ? '\0' : s[i]; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
};

mpz_class parse_digits(Cursor& c) {
  size_t start = c.i;
  while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) ++c.i;
  require(c.i > start, "expected digits in scalar literal '" + c.s + "'");
  return mpz_class(c.s.substr(start, c.i - start));
}

// term := rational ['*' i] | [rational '*'] 'i'
Scalar parse_term(Cursor& c, bool negative) {
  c.skip_ws();
  mpq_class mag;
  bool have_number = false;
  if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
    mpz_class num = parse_digits(c);
    mpz_class den = 1;
    if (c.peek() == '/') {
      ++c.i;
      require(std::isdigit(static_cast<unsigned char>(c.peek())),
              "expected denominator digits in '" + c.s + "'");
      den = parse_digits(c);
      require(den != 0, "zero denominator in '" + c.s + "'");
    }
    mag = mpq_class(num, den);
    mag.canonicalize();
    have_number = true;
  }
  c.skip_ws();
  bool imaginary = false;
  if (c.peek() == '*') {
    require(have_number, "unexpected '*' in scalar literal '" + c.s + "'");
    ++c.i;
    c.skip_ws();
    require(c.peek() == 'i', "expected 'i' after '*' in '" + c.s + "'");
    ++c.i;
    imaginary = true;
  } else if (c.peek() == 'i' && !have_number) {
    ++c.i;
    mag = 1;
    imaginary = true;
  } else if (c.peek() == 'i' && have_number) {
    // Also accept "2i".
    ++c.i;
    imaginary = true;
  }
  require(have_number || imaginary, "empty term in scalar literal '" + c.s + "'");
  if (negative) mag = -mag;
  return imaginary ? Scalar(mpq_class(0), mag) : Scalar(mag, mpq_class(0));
}

}  // namespace

Scalar Scalar::parse(const std::string& text) {
  Cursor c{text};
  c.skip_ws();
  require(!c.done(), "empty scalar literal");
  Scalar acc;
  bool first = true;
  while (true) {
    c.skip_ws();
    bool neg = false;
    if (c.peek() == '+' || c.peek() == '-') {
      neg = c.peek() == '-';
      ++c.i;
    } else {
      require(first, "expected '+' or '-' in scalar literal '" + text + "'");
    }
    acc += parse_term(c, neg);
    first = false;
    c.skip_ws();
    if (c.done()) break;
    require(c.peek() == '+' || c.peek() == '-',
            "trailing garbage in scalar literal '" + text + "'");
  }
  return acc;
}

}  // namespace fss
