#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace powerseq {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration ran past its step or bit-size budget.
class resource_error : public error {
 public:
  using error::error;
};

class parse_error : public error {
 public:
  parse_error(const std::string& msg, std::size_t position)
      : error(msg + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

// Floor division with sign convention of mathematical floor.
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Nonnegative remainder, b > 0.
inline Int mod_floor(const Int& a, const Int& b) {
  Int r = a % b;
  if (r < 0) r += b;
  return r;
}

inline Int rat_floor(const Rat& r) { return floor_div(rat_num(r), rat_den(r)); }

// Fractional part in [0, 1).
inline Rat frac(const Rat& r) { return r - Rat(rat_floor(r)); }

Int factorial(unsigned n);

Int lcm_int(const Int& a, const Int& b);

// True iff a <= sqrt(x), for a >= 0, x >= 0. Exact (compares a^2 with x).
inline bool leq_sqrt(const Rat& a, const Rat& x) { return a * a <= x; }

// Rational s with sqrt(x) <= s and s - sqrt(x) < slack, for x >= 0.
Rat sqrt_upper(const Rat& x, const Rat& slack);

std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& text);

// Decimal approximation; only for display, never for decisions.
double rat_to_double(const Rat& r);

}  // namespace powerseq
