#ifndef GUEGAP_TEST_QUADRATURE_HPP
#define GUEGAP_TEST_QUADRATURE_HPP

// Double-exponential quadrature in HPReal arithmetic. Test-only oracle: it
// shares no code with the moment recursion or the orthogonalization.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "guegap/hpreal.hpp"

namespace guegap::testing {

using Integrand = std::function<HPReal(const HPReal&)>;

namespace detail {

// Sum over t = k*step, |t| <= t_max, of weight(t) * f(x(t)); `magnitude`
// receives the same sum of absolute values.
template <class Map>
HPReal de_sum(const Integrand& f, Precision prec, double step, double t_max, Map map, HPReal& magnitude) {
  HPReal total(prec);
  magnitude = HPReal(prec);
  const long K = static_cast<long>(t_max / step) + 1;
  for (long k = -K; k <= K; ++k) {
    const HPReal t = HPReal(static_cast<double>(k), prec) * HPReal(step, prec);
    HPReal x(prec), w(prec);
    if (!map(t, x, w)) continue;
    const HPReal term = w * f(x);
    total += term;
    magnitude += abs(term);
  }
  magnitude *= HPReal(step, prec);
  return total * HPReal(step, prec);
}

template <class Map>
HPReal de_integrate(const Integrand& f, Precision prec, Map map) {
  const Precision wp = prec + 32;
  const double t_max = std::log(4.0 * static_cast<double>(wp.bits) / M_PI) + 1.0;
  const HPReal tol = ldexp(HPReal(1L, wp), -(prec.bits + 8));
  HPReal magnitude(wp);
  HPReal prev = de_sum(f, wp, 0.5, t_max, map, magnitude);
  for (int level = 2; level <= 14; ++level) {
    const double step = std::ldexp(1.0, -level);
    HPReal cur = de_sum(f, wp, step, t_max, map, magnitude);
    const HPReal diff = abs(cur - prev);
    if (diff <= tol * magnitude && level >= 4) return cur.at(prec);
    prev = std::move(cur);
  }
  throw std::runtime_error("quadrature did not converge");
}

}  // namespace detail

/// int_lo^hi f(x) dx by tanh-sinh.
inline HPReal integrate(const Integrand& f, const HPReal& lo, const HPReal& hi, Precision prec) {
  const Precision wp = prec + 32;
  const HPReal c = ldexp(lo.at(wp) + hi.at(wp), -1);
  const HPReal d = ldexp(hi.at(wp) - lo.at(wp), -1);
  const HPReal half_pi = ldexp(pi(wp), -1);
  return detail::de_integrate(f, prec, [&](const HPReal& t, HPReal& x, HPReal& w) {
    const HPReal et = exp(t);
    const HPReal sinh_t = ldexp(et - 1L / et, -1);
    const HPReal cosh_t = ldexp(et + 1L / et, -1);
    const HPReal u = half_pi * sinh_t;
    const HPReal eu = exp(u);
    const HPReal ch = ldexp(eu + 1L / eu, -1);
    const HPReal th = (eu - 1L / eu) / (eu + 1L / eu);
    x = c + d * th;
    w = d * half_pi * cosh_t / square(ch);
    // Skip nodes that rounded onto the endpoints.
    return x > lo && x < hi;
  });
}

/// int_lo^inf f(x) dx by exp-sinh; f must decay at least exponentially.
inline HPReal integrate_to_infinity(const Integrand& f, const HPReal& lo, Precision prec) {
  const Precision wp = prec + 32;
  const HPReal half_pi = ldexp(pi(wp), -1);
  return detail::de_integrate(f, prec, [&](const HPReal& t, HPReal& x, HPReal& w) {
    const HPReal et = exp(t);
    const HPReal sinh_t = ldexp(et - 1L / et, -1);
    const HPReal cosh_t = ldexp(et + 1L / et, -1);
    const HPReal e = exp(half_pi * sinh_t);
    x = lo.at(wp) + e;
    w = half_pi * cosh_t * e;
    return x > lo && e.to_double() < 1e6;
  });
}

}  // namespace guegap::testing

#endif  // GUEGAP_TEST_QUADRATURE_HPP
