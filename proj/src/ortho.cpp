#include "guegap/ortho.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "guegap/errors.hpp"

namespace guegap {

namespace {

// Chebyshev algorithm specialized to an even weight. Returns h_0..h_{n_max},
// stopping early (shorter vector) if a pivot is not strictly positive.
std::vector<HPReal> chebyshev_pivots(const MomentTable& moments, int n_max) {
  const Precision prec = moments.params.prec();
  const int L = 2 * n_max + 1;
  std::vector<HPReal> prev2(static_cast<std::size_t>(L), HPReal(prec));
  std::vector<HPReal> prev;
  prev.reserve(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) prev.push_back(moments.moment(l));

  std::vector<HPReal> h;
  h.reserve(static_cast<std::size_t>(n_max) + 1);
  h.push_back(prev[0]);
  if (h.back().sign() <= 0) return h;

  std::vector<HPReal> cur(static_cast<std::size_t>(L), HPReal(prec));
  HPReal beta_prev(prec);  // beta_{k-1}; beta_0 = 0
  for (int k = 1; k <= n_max; ++k) {
    for (int l = k; l < L - k; l += 2) {
      auto& out = cur[static_cast<std::size_t>(l)];
      out = prev[static_cast<std::size_t>(l + 1)];
      if (k >= 2) out -= beta_prev * prev2[static_cast<std::size_t>(l)];
    }
    h.push_back(cur[static_cast<std::size_t>(k)]);
    if (h.back().sign() <= 0) return h;
    beta_prev = h[static_cast<std::size_t>(k)] / h[static_cast<std::size_t>(k - 1)];
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return h;
}

double rel_diff(const HPReal& value, const HPReal& reference) {
  if (reference.is_zero()) return value.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
  const double d = (abs(value - reference) / abs(reference)).to_double();
  return d;
}

}  // namespace

double RecurrenceTable::significant_bits() const {
  double worst = static_cast<double>(prec().bits);
  for (double e : h_rel_error) {
    const double bits = e > 0.0 ? -std::log2(e) : static_cast<double>(prec().bits);
    worst = std::min(worst, bits);
  }
  return worst;
}

RecurrenceTable build_recurrence(const MomentTable& moments, int n_max, const OrthoOptions& options) {
  if (n_max < 0) throw std::invalid_argument("build_recurrence: n_max < 0");
  if (moments.max_order() < n_max) {
    throw std::invalid_argument("build_recurrence: moment table too short for n_max");
  }
  const WeightParams& params = moments.params;
  const Precision prec = params.prec();

  auto h = chebyshev_pivots(moments, n_max);
  const MomentTable shadow_moments = build_table(params.with_precision(prec + options.guard_bits), n_max);
  auto h_shadow = chebyshev_pivots(shadow_moments, n_max);

  RecurrenceTable t{params, n_max, {}, {}, {}, {}, {}, {}};
  t.h_rel_error.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (i >= h.size() || i >= h_shadow.size() || h[i].sign() <= 0 || h_shadow[i].sign() <= 0) {
      throw PrecisionExhausted(n, prec.bits, 0.0);
    }
    const double err = rel_diff(h[i], h_shadow[i]);
    const double bits = err > 0.0 ? -std::log2(err) : static_cast<double>(prec.bits);
    if (bits < options.min_significant_bits) throw PrecisionExhausted(n, prec.bits, bits);
    t.h_rel_error.push_back(err);
  }
  h.resize(static_cast<std::size_t>(n_max) + 1, HPReal(prec));
  t.h = std::move(h);

  t.beta.reserve(t.h.size());
  t.logD.reserve(t.h.size());
  t.p_coeff.reserve(t.h.size());
  t.beta.emplace_back(prec);
  for (int n = 1; n <= n_max; ++n) {
    t.beta.push_back(t.h[static_cast<std::size_t>(n)] / t.h[static_cast<std::size_t>(n - 1)]);
  }

  HPReal logd(prec);
  HPReal psum(prec);
  for (int n = 0; n <= n_max; ++n) {
    t.logD.push_back(logd);
    t.p_coeff.push_back(-psum);
    logd += log(t.h[static_cast<std::size_t>(n)]);
    psum += t.beta[static_cast<std::size_t>(n)];
  }

  // P_n(a) for n = 0..n_max
  const HPReal& a = params.a();
  t.Pa.reserve(t.h.size());
  t.Pa.emplace_back(1L, prec);
  if (n_max >= 1) t.Pa.push_back(a.at(prec));
  for (int n = 1; n < n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    t.Pa.push_back(a * t.Pa[i] - t.beta[i] * t.Pa[i - 1]);
  }
  return t;
}

RecurrenceTable solve_recurrence(const WeightParams& params, int n_max, const EscalationPolicy& policy) {
  WeightParams current = params;
  for (;;) {
    try {
      return build_recurrence(build_table(current, n_max), n_max, policy.ortho);
    } catch (const PrecisionExhausted&) {
      const Precision next{current.prec().bits * 2};
      if (next.bits > policy.cap_bits) throw;
      current = params.with_precision(next);
    }
  }
}

std::pair<HPReal, HPReal> eval_poly(const RecurrenceTable& table, int n, const HPReal& z) {
  if (n < 0 || n > table.n_max) throw std::out_of_range("eval_poly: n outside table");
  const Precision prec = max(table.prec(), z.precision());
  HPReal pm1(prec);
  HPReal p(1L, prec);
  for (int k = 0; k < n; ++k) {
    HPReal next = z * p;
    if (k >= 1) next -= table.beta[static_cast<std::size_t>(k)] * pm1;
    pm1 = std::move(p);
    p = std::move(next);
  }
  return {std::move(p), std::move(pm1)};
}

PolyJet eval_poly_jet(const RecurrenceTable& table, int n, const HPReal& z) {
  if (n < 0 || n > table.n_max) throw std::out_of_range("eval_poly_jet: n outside table");
  const Precision prec = max(table.prec(), z.precision());
  // (value, d/dz, d2/dz2) of P_{k-1} and P_k
  HPReal q0(prec), dq0(prec), d2q0(prec);
  HPReal q1(1L, prec), dq1(prec), d2q1(prec);
  for (int k = 0; k < n; ++k) {
    // P_{k+1} = z P_k - beta_k P_{k-1}
    // P'_{k+1} = P_k + z P'_k - beta_k P'_{k-1}
    // P''_{k+1} = 2 P'_k + z P''_k - beta_k P''_{k-1}
    HPReal v = z * q1;
    HPReal dv = q1 + z * dq1;
    HPReal d2v = ldexp(dq1, 1) + z * d2q1;
    if (k >= 1) {
      const HPReal& b = table.beta[static_cast<std::size_t>(k)];
      v -= b * q0;
      dv -= b * dq0;
      d2v -= b * d2q0;
    }
    q0 = std::move(q1);
    dq0 = std::move(dq1);
    d2q0 = std::move(d2q1);
    q1 = std::move(v);
    dq1 = std::move(dv);
    d2q1 = std::move(d2v);
  }
  return {std::move(q1), std::move(dq1), std::move(d2q1), std::move(q0), std::move(dq0), std::move(d2q0)};
}

HPReal hankel_logdet(const RecurrenceTable& table, int n) {
  if (n < 0 || n > table.n_max) throw std::out_of_range("hankel_logdet: n outside table");
  return table.logD[static_cast<std::size_t>(n)];
}

HPReal hankel_logdet_direct(const WeightParams& params, int n, long extra_bits) {
  if (n < 1) throw std::invalid_argument("hankel_logdet_direct: n < 1");
  const Precision wp = params.prec() + extra_bits;
  const MomentTable mom = build_table(params.with_precision(wp), n);
  const auto N = static_cast<std::size_t>(n);
  std::vector<std::vector<HPReal>> m(N, std::vector<HPReal>(N, HPReal(wp)));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) m[i][j] = mom.moment(static_cast<int>(i + j));
  }
  int sign = 1;
  HPReal logdet(wp);
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r) {
      if (abs(m[r][col]) > abs(m[piv][col])) piv = r;
    }
    if (m[piv][col].is_zero()) throw PrecisionExhausted(static_cast<int>(col), wp.bits, 0.0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      sign = -sign;
    }
    if (m[col][col].sign() < 0) sign = -sign;
    logdet += log(abs(m[col][col]));
    for (std::size_t r = col + 1; r < N; ++r) {
      if (m[r][col].is_zero()) continue;
      const HPReal f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < N; ++c) m[r][c] -= f * m[col][c];
    }
  }
  if (sign < 0) throw PrecisionExhausted(n - 1, wp.bits, 0.0);
  return logdet.at(params.prec());
}

}  // namespace guegap
