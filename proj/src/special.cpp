#include "guegap/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace guegap {

namespace {

// Each error source (truncation, rounding) is designed to stay below
// 2^-(prec + kMarginBits); together they stay below 2^-(prec + kMarginBits - 1).
constexpr long kMarginBits = 10;

long ceil_log2(double v) { return v <= 1.0 ? 0 : static_cast<long>(std::ceil(std::log2(v))); }

// log2 of 1/erfc(x) upper bound for x >= 0, from
// erfc(x) > 2 e^{-x^2} / (sqrt(pi) (x + sqrt(x^2 + 2))).
double log2_inv_erfc_bound(double x) {
  const double x2 = x * x;
  return x2 * std::log2(std::exp(1.0)) + std::log2(std::sqrt(M_PI) * (x + std::sqrt(x2 + 2.0)) / 2.0);
}

// erfc(x) for 0 <= x <= switch point, via 1 - erf(x) with
// erf(x) = 2/sqrt(pi) e^{-x^2} sum_k 2^k x^{2k+1} / (2k+1)!!  (all terms positive).
HPReal erfc_maclaurin(const HPReal& x, Precision prec) {
  const double xd = x.to_double();
  const double x2d = xd * xd;
  // Terms grow until k ~ x^2 and then shrink at least geometrically by 1/2
  // once k >= 2x^2, so this caps the term count for any working precision
  // of interest.
  const double k_cap_base = std::ceil(2.0 * x2d) + 2.0;
  long w = prec.bits + kMarginBits + 64;
  for (int it = 0; it < 3; ++it) {
    const double k_cap = k_cap_base + static_cast<double>(w);
    w = prec.bits + kMarginBits + ceil_log2(4.0 * k_cap + x2d + 10.0) +
        static_cast<long>(std::ceil(log2_inv_erfc_bound(xd)));
  }
  const Precision wp{w};
  const HPReal xw = x.at(wp);
  const HPReal x2 = square(xw);
  const HPReal two_x2 = x2 * 2;

  HPReal term = xw;
  HPReal sum = xw;
  const long k_limit = static_cast<long>(k_cap_base) + w + 8;
  for (long k = 0;; ++k) {
    if (k > k_limit) throw std::logic_error("erfc Maclaurin series failed to converge");
    term *= two_x2;
    term /= (2 * k + 3);
    sum += term;
    // ratio of successive terms is 2x^2/(2k+5) for the next one
    const bool shrinking = 4.0 * x2d <= static_cast<double>(2 * k + 5);
    if (shrinking && ldexp(term, w) <= sum) break;
  }
  HPReal erf = sum * exp(-x2) * 2 / sqrt_pi(wp);
  return (1L - erf).at(prec);
}

// erfc(x) for x > switch point via the asymptotic expansion
// erfc(x) ~ e^{-x^2}/(x sqrt(pi)) sum_k (-1)^k (2k-1)!! / (2x^2)^k.
HPReal erfc_asymptotic(const HPReal& x, Precision prec) {
  const double x2d = x.to_double() * x.to_double();
  const long w = prec.bits + kMarginBits + ceil_log2(4.0 * (x2d + 1.0) + x2d + 10.0);
  const Precision wp{w};
  const HPReal xw = x.at(wp);
  const HPReal inv_two_x2 = 1L / (square(xw) * 2);

  // Remainder is bounded by the first omitted term; the sum is >= 1/2.
  const HPReal tol = ldexp(HPReal(1L, Precision{64}), -(prec.bits + kMarginBits + 1));
  HPReal term(1L, wp);
  HPReal sum(1L, wp);
  for (long k = 0;; ++k) {
    HPReal next = -term * (2 * k + 1) * inv_two_x2;
    if (abs(next) <= tol) break;
    if (static_cast<double>(k) > x2d) {
      throw std::logic_error("erfc asymptotic expansion used below its switch point");
    }
    sum += next;
    term = std::move(next);
  }
  return (sum * exp(-square(xw)) / (xw * sqrt_pi(wp))).at(prec);
}

}  // namespace

HPReal erfc_switch_point(Precision prec) {
  // The smallest asymptotic term is about sqrt(2) e^{-x^2}.
  const double x2 = static_cast<double>(prec.bits + kMarginBits + 2) * std::log(2.0) + 1.0;
  return HPReal(std::sqrt(x2), Precision{64});
}

ErfcResult erfc_with_bound(const HPReal& x, Precision prec) {
  if (prec < kMinPrecision) throw std::domain_error("erfc_hp needs at least 64 bits");
  if (!x.is_finite()) throw std::domain_error("erfc_hp needs a finite argument");
  const HPReal bound = ldexp(HPReal(1L, Precision{64}), -(prec.bits + kMarginBits - 1));
  if (x.is_zero()) return {HPReal(1L, prec), HPReal(0L, Precision{64})};

  const HPReal ax = abs(x);
  HPReal value = (ax <= erfc_switch_point(prec)) ? erfc_maclaurin(ax, prec) : erfc_asymptotic(ax, prec);
  if (x.sign() < 0) {
    // 2 - erfc(|x|) lies in [1, 2): no cancellation.
    value = (2L - value.at(prec + 8)).at(prec);
  }
  return {std::move(value), bound};
}

HPReal erfc_hp(const HPReal& x, Precision prec) { return erfc_with_bound(x, prec).value; }

HPReal gamma_half(long m, Precision prec) {
  if (m < 0) throw std::domain_error("gamma_half needs m >= 0");
  const Precision wp = prec + 32 + ceil_log2(static_cast<double>(m) + 1.0);
  HPReal dfact(1L, wp);
  for (long j = 1; j <= m; ++j) dfact *= (2 * j - 1);
  return ldexp(dfact * sqrt_pi(wp), -m).at(prec);
}

HPReal barnes_g(long n, Precision prec) {
  if (n < 1 || n > 64) {
    throw std::domain_error("barnes_g is defined here for 1 <= n <= 64, got " + std::to_string(n));
  }
  const Precision wp = prec + 32;
  HPReal g(1L, wp);
  HPReal gamma_k(1L, wp);  // Gamma(k) = (k-1)!
  for (long k = 1; k < n; ++k) {
    if (k > 1) gamma_k *= (k - 1);
    g *= gamma_k;
  }
  return g.at(prec);
}

}  // namespace guegap
