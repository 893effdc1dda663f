#pragma once

#include <cmath>

namespace pothenot {

// Quad precision where the compiler has it. Only + - * / and sqrt are needed,
// so libquadmath is not linked.
#if defined(__SIZEOF_FLOAT128__)
using Extended = __float128;
#else
using Extended = long double;
#endif

inline Extended ext_abs(Extended x) { return x < 0 ? -x : x; }

inline Extended ext_sqrt(Extended x) {
  if (!(x > 0)) return 0;
  Extended y = std::sqrt(static_cast<double>(x));
  if (y == 0) return 0;
  y = (y + x / y) / 2;
  y = (y + x / y) / 2;
  return y;
}

// Running bound for a polynomial expression: every operation accumulates
// absolute values, so evaluating a formula on Magnitude yields the sum of the
// magnitudes of its terms.
struct Magnitude {
  double v = 0;
  Magnitude() = default;
  Magnitude(double x) : v(std::abs(x)) {}
};

inline Magnitude operator+(Magnitude a, Magnitude b) { return {a.v + b.v}; }
inline Magnitude operator-(Magnitude a, Magnitude b) { return {a.v + b.v}; }
inline Magnitude operator-(Magnitude a) { return a; }
inline Magnitude operator*(Magnitude a, Magnitude b) { return {a.v * b.v}; }

}  // namespace pothenot
