#include "powerseq/rational.hpp"

#include <boost/multiprecision/integer.hpp>

namespace powerseq {

Int factorial(unsigned n) {
  Int f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

Int lcm_int(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  Int g = gcd(a, b);
  return abs(a / g * b);
}

Rat sqrt_upper(const Rat& x, const Rat& slack) {
  if (x < 0) throw error("sqrt_upper: negative argument");
  if (x == 0) return Rat(0);
  if (slack <= 0) throw error("sqrt_upper: slack must be positive");
  // Scale so that u/m encloses sqrt(x) from above with error < 1/m <= slack.
  Int m = rat_den(slack) / rat_num(slack) + 1;
  Int p = rat_num(x), q = rat_den(x);
  // Smallest u with (u/m)^2 >= p/q, i.e. u^2 * q >= p * m^2.
  Int target = p * m * m;
  Int quot = target / q;
  Int u = sqrt(quot);  // integer sqrt, rounded down
  while (u * u * q < target) ++u;
  while (u > 0 && (u - 1) * (u - 1) * q >= target) --u;
  return Rat(u, m);
}

std::string rat_to_string(const Rat& r) {
  std::string s = rat_num(r).str();
  if (rat_den(r) != 1) {
    s += "/";
    s += rat_den(r).str();
  }
  return s;
}

Rat rat_from_string(const std::string& text) {
  auto slash = text.find('/');
  Int num, den = 1;
  try {
    if (slash == std::string::npos) {
      num = Int(text);
    } else {
      num = Int(text.substr(0, slash));
      den = Int(text.substr(slash + 1));
    }
  } catch (const std::exception&) {
    throw error("malformed rational: " + text);
  }
  if (den == 0) throw error("rational with zero denominator: " + text);
  return Rat(num, den);
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace powerseq
