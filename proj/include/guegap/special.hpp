#ifndef GUEGAP_SPECIAL_HPP
#define GUEGAP_SPECIAL_HPP

#include "guegap/hpreal.hpp"

namespace guegap {

/// erfc value together with an a priori relative error bound. The bound
/// covers series truncation and accumulated rounding.
struct ErfcResult {
  HPReal value;
  HPReal rel_error_bound;
};

/// x above which the asymptotic expansion, truncated at its smallest term,
/// already meets the 2^(8-prec) relative error target.
HPReal erfc_switch_point(Precision prec);

/// Complementary error function with relative error below 2^(8 - prec).
///
/// |x| <= erfc_switch_point(prec): Maclaurin series for erf, evaluated with
/// enough guard bits to absorb the cancellation in 1 - erf(x).
/// Larger x: asymptotic expansion stopped before its smallest term; the
/// series is enveloping for real x > 0, so the first omitted term bounds
/// the remainder. Negative x goes through erfc(-x) = 2 - erfc(x).
ErfcResult erfc_with_bound(const HPReal& x, Precision prec);

HPReal erfc_hp(const HPReal& x, Precision prec);

/// Gamma(m + 1/2) = (2m-1)!! sqrt(pi) / 2^m.
HPReal gamma_half(long m, Precision prec);

/// Barnes G(n) for 1 <= n <= 64 via G(k+1) = Gamma(k) G(k), G(1) = 1.
/// Throws std::domain_error outside that range.
HPReal barnes_g(long n, Precision prec);

}  // namespace guegap

#endif  // GUEGAP_SPECIAL_HPP
