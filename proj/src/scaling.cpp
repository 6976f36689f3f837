#include "guegap/scaling.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "guegap/errors.hpp"
#include "guegap/ladder.hpp"
#include "guegap/parallel.hpp"

namespace guegap {

namespace {

constexpr int kHalfWidth = 4;

// 5-point first and second derivatives from f[-2..2], O(h^4).
HPReal fd1(const std::vector<HPReal>& f, const HPReal& h) {
  return ((f[3] - f[1]) * 8 - (f[4] - f[0])) / (h * 12);
}

HPReal fd2(const std::vector<HPReal>& f, const HPReal& h) {
  return ((f[3] + f[1]) * 16 - (f[4] + f[0]) - f[2] * 30) / (square(h) * 12);
}

HPReal two_sqrt_2n(int n, Precision prec) { return ldexp(sqrt(HPReal(2L * n, prec)), 1); }

TauSample blank_sample(Precision prec) {
  const HPReal z(prec);
  return TauSample{z, z, z, false, z, z, z, z, z, z, prec.bits};
}

TauSample compute_cell(const WeightParams& params_template, const HPReal& tau_in, int n,
                       const ScalingOptions& options) {
  const Precision prec = scaling_precision(n, options);
  const WeightParams params = params_template.with_precision(prec);
  const HPReal tau = tau_in.at(prec);
  const HPReal sqrt_n = sqrt(HPReal(n, prec));
  TauSample out = blank_sample(prec);

  const std::vector<HPReal> a_values = cell_a_values(tau, n, options);
  if (a_values.empty()) {
    const HPReal a = tau_to_a(tau, n, prec);
    const RecurrenceTable table = solve_recurrence(params.with_a(a), n, options.policy);
    const AuxSequence aux = build_aux(table);
    HPReal sum(prec);
    for (int j = 0; j < n; ++j) sum += aux.R[static_cast<std::size_t>(j)];
    out.sigma = -a * sum;
    out.r = aux.r[static_cast<std::size_t>(n)];
    out.Rs = sqrt_n * aux.R[static_cast<std::size_t>(n)];
    out.prec_bits = table.prec().bits;
    return out;
  }

  const HPReal c = two_sqrt_2n(n, prec);
  const HPReal h_tau(options.h_tau, prec);
  AGrid grid = AGrid::centered(a_values[kHalfWidth], h_tau / c, kHalfWidth);
  grid.values = a_values;
  const GridData data = build_grid_data(params, n, grid, options.policy, 1);
  const SigmaSeries series = sigma_series(data, n);  // points k = -2..2

  std::vector<HPReal> ds, r, Rs;
  for (int k = 0; k < 5; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    ds.push_back(series.sigma1[idx] / c);
    const auto& aux = data.points[idx + kHalfWidth - 2].aux;
    r.push_back(aux.r[static_cast<std::size_t>(n)]);
    Rs.push_back(sqrt_n * aux.R[static_cast<std::size_t>(n)]);
  }
  out.sigma = series.sigma[2];
  out.r = r[2];
  out.Rs = Rs[2];
  out.has_derivatives = true;
  out.dsigma = ds[2];
  out.d2sigma = fd1(ds, h_tau);
  out.dr = fd1(r, h_tau);
  out.d2r = fd2(r, h_tau);
  out.dRs = fd1(Rs, h_tau);
  out.d2Rs = fd2(Rs, h_tau);
  long bits = 0;
  for (const auto& p : data.points) bits = std::max<long>(bits, p.table.prec().bits);
  out.prec_bits = bits;
  return out;
}

HPReal balanced_residual(const HPReal& l, const HPReal& r) { return abs(l - r) / (abs(l) + abs(r) + 1); }

std::pair<HPReal, HPReal> limit_ode_point(const HPReal& tau, const HPReal& R, const HPReal& dR, const HPReal& d2R,
                                          const HPReal& r, const HPReal& dr, const HPReal& d2r) {
  const Precision prec = max(tau.precision(), R.precision());
  const HPReal sqrt2 = sqrt(HPReal(2L, prec));
  const HPReal gap = sqrt2 * R - tau;
  const HPReal tiny = ldexp(abs(tau) + 1, -(prec.bits / 2));
  if (R.is_zero() || abs(gap) <= tiny) {
    throw PoleInODE("limit R equation singular at tau=" + tau.to_string(20));
  }
  if (tau.is_zero()) throw PoleInODE("limit R equation singular at tau=0");
  const HPReal rhs = (1L / ldexp(R, 1) + sqrt2 / ldexp(gap, 1)) * square(dR) - (1L / tau + 1L / gap) * dR +
                     sqrt2 / ldexp(tau, 1) * square(R) - ldexp(R, -1);
  HPReal res_R = relative_residual(d2R, rhs);
  const HPReal r2 = square(r);
  HPReal res_r = balanced_residual(ldexp(r2 * (square(dr) + r2), 2), square(tau) * square(d2r + r));
  return {std::move(res_R), std::move(res_r)};
}

}  // namespace

Precision scaling_precision(int n, const ScalingOptions& options) {
  return Precision{std::max<long>(64, options.base_bits + options.bits_per_n * n)};
}

HPReal tau_to_a(const HPReal& tau, int n, Precision prec) { return tau.at(prec) / two_sqrt_2n(n, prec); }

std::vector<HPReal> cell_a_values(const HPReal& tau_in, int n, const ScalingOptions& options) {
  const Precision prec = scaling_precision(n, options);
  const HPReal tau = tau_in.at(prec);
  const HPReal h_tau(options.h_tau, prec);
  if (tau - h_tau * kHalfWidth <= 0) return {};
  const HPReal c = two_sqrt_2n(n, prec);
  std::vector<HPReal> out;
  for (int k = -kHalfWidth; k <= kHalfWidth; ++k) out.push_back((tau + h_tau * k) / c);
  return out;
}

Extrapolated richardson_extrapolate(const std::vector<HPReal>& levels, const std::vector<int>& n_values) {
  if (levels.empty()) throw std::invalid_argument("richardson_extrapolate: no levels");
  if (n_values.size() != levels.size()) throw std::invalid_argument("richardson_extrapolate: size mismatch");
  const std::size_t m = std::min<std::size_t>(3, levels.size());
  const std::size_t first = levels.size() - m;
  const Precision prec = levels.back().precision();
  // Neville table in x = 1/n, evaluated at x = 0.
  std::vector<HPReal> x, t;
  for (std::size_t i = first; i < levels.size(); ++i) {
    x.push_back(1L / HPReal(n_values[i], prec));
    t.push_back(levels[i]);
  }
  HPReal prev = t.back();
  for (std::size_t k = 1; k < m; ++k) {
    for (std::size_t i = m - 1; i >= k; --i) t[i] = (x[i - k] * t[i] - x[i] * t[i - 1]) / (x[i - k] - x[i]);
    if (k + 1 < m) prev = t.back();
  }
  if (m == 1) return {t.back(), HPReal(prec), 0.0};
  HPReal err = abs(t.back() - prev);
  double order = 0.0;
  if (m == 3) {
    const HPReal d2 = levels.back() - levels[levels.size() - 2];
    const HPReal d1 = levels[levels.size() - 2] - levels[first];
    if (!d2.is_zero()) {
      const HPReal q = d1 / d2;
      if (q > 0) order = std::log2(q.to_double()) / std::log2(static_cast<double>(n_values.back()) / n_values[levels.size() - 2]);
    }
  }
  return {t.back(), std::move(err), order};
}

const HPReal& ScalingProfile::sigma_val(std::size_t i, std::size_t j) const { return samples.at(i).at(j).sigma; }
const HPReal& ScalingProfile::r_val(std::size_t i, std::size_t j) const { return samples.at(i).at(j).r; }
const HPReal& ScalingProfile::Rs_val(std::size_t i, std::size_t j) const { return samples.at(i).at(j).Rs; }

TauLimit ScalingProfile::limit(std::size_t tau_index, int n_max) const {
  std::vector<const TauSample*> levels;
  std::vector<int> ns;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_max <= 0 || n_list[i] <= n_max) {
      levels.push_back(&samples.at(i).at(tau_index));
      ns.push_back(n_list[i]);
    }
  }
  if (levels.empty()) throw std::invalid_argument("no profile level with n <= n_max");
  auto extrap = [&](auto field) {
    std::vector<HPReal> v;
    for (const auto* s : levels) v.push_back(field(*s));
    return richardson_extrapolate(v, ns);
  };
  TauLimit out{extrap([](const TauSample& s) { return s.sigma; }), extrap([](const TauSample& s) { return s.r; }),
               extrap([](const TauSample& s) { return s.Rs; }), levels.back()->has_derivatives, {}};
  if (out.has_derivatives) {
    out.derivs.push_back(extrap([](const TauSample& s) { return s.dsigma; }));
    out.derivs.push_back(extrap([](const TauSample& s) { return s.d2sigma; }));
    out.derivs.push_back(extrap([](const TauSample& s) { return s.dr; }));
    out.derivs.push_back(extrap([](const TauSample& s) { return s.d2r; }));
    out.derivs.push_back(extrap([](const TauSample& s) { return s.dRs; }));
    out.derivs.push_back(extrap([](const TauSample& s) { return s.d2Rs; }));
  }
  return out;
}

ScalingProfile build_profile(const WeightParams& params_template, const std::vector<HPReal>& tau_grid,
                             const std::vector<int>& n_list, const ScalingOptions& options) {
  if (n_list.empty() || tau_grid.empty()) throw std::invalid_argument("build_profile: empty n_list or tau grid");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2 || (i > 0 && n_list[i] <= n_list[i - 1])) {
      throw std::invalid_argument("build_profile: n_list must be strictly increasing with n >= 2");
    }
  }
  for (const auto& t : tau_grid) {
    if (t.sign() < 0) throw std::invalid_argument("build_profile: tau must be >= 0");
  }
  if (!(options.h_tau > 0)) throw std::invalid_argument("build_profile: h_tau must be positive");

  const std::size_t T = tau_grid.size();
  std::vector<std::optional<TauSample>> cells(n_list.size() * T);
  parallel_for(cells.size(), options.workers, [&](std::size_t k) {
    const int n = n_list[k / T];
    const HPReal& tau = tau_grid[k % T];
    try {
      cells[k] = compute_cell(params_template, tau, n, options);
    } catch (const PrecisionExhausted& e) {
      throw PrecisionExhausted(e.n(), e.prec_bits(), e.significant_bits(),
                               "scaling cell n=" + std::to_string(n) + " tau=" + tau.to_string(12));
    }
  });

  ScalingProfile profile{params_template, tau_grid, n_list, options, {}};
  profile.samples.resize(n_list.size());
  for (std::size_t k = 0; k < cells.size(); ++k) profile.samples[k / T].push_back(std::move(*cells[k]));
  return profile;
}

HPReal pv_residual_point(const HPReal& tau, const HPReal& s, const HPReal& s1, const HPReal& s2) {
  const HPReal u = s - tau * s1;
  const HPReal lhs = square(tau * s2);
  const HPReal rhs = -ldexp((u - square(s1)) * u, 2);
  return balanced_residual(lhs, rhs);
}

HPReal pv_residual(const ScalingProfile& profile, std::size_t tau_index, int n_max) {
  const TauLimit lim = profile.limit(tau_index, n_max);
  if (!lim.has_derivatives) throw std::invalid_argument("pv_residual needs a tau stencil (tau too small)");
  return pv_residual_point(profile.tau_grid.at(tau_index).at(lim.sigma.value.precision()), lim.sigma.value,
                           lim.dsigma(), lim.d2sigma());
}

HPReal pv_residual_raw(const ScalingProfile& profile, std::size_t n_index, std::size_t tau_index) {
  const TauSample& s = profile.samples.at(n_index).at(tau_index);
  if (!s.has_derivatives) throw std::invalid_argument("pv_residual_raw needs a tau stencil (tau too small)");
  return pv_residual_point(profile.tau_grid.at(tau_index).at(s.sigma.precision()), s.sigma, s.dsigma, s.d2sigma);
}

std::pair<HPReal, HPReal> limit_ode_residuals(const ScalingProfile& profile, std::size_t tau_index, int n_max) {
  const TauLimit lim = profile.limit(tau_index, n_max);
  if (!lim.has_derivatives) throw std::invalid_argument("limit_ode_residuals needs a tau stencil (tau too small)");
  const HPReal tau = profile.tau_grid.at(tau_index).at(lim.Rs.value.precision());
  return limit_ode_point(tau, lim.Rs.value, lim.dRs(), lim.d2Rs(), lim.r.value, lim.dr(), lim.d2r());
}

std::pair<HPReal, HPReal> limit_ode_residuals_raw(const ScalingProfile& profile, std::size_t n_index,
                                                  std::size_t tau_index) {
  const TauSample& s = profile.samples.at(n_index).at(tau_index);
  if (!s.has_derivatives) throw std::invalid_argument("limit_ode_residuals_raw needs a tau stencil");
  const HPReal tau = profile.tau_grid.at(tau_index).at(s.Rs.precision());
  return limit_ode_point(tau, s.Rs, s.dRs, s.d2Rs, s.r, s.dr, s.d2r);
}

BranchConsistency limit_branch(const ScalingProfile& profile, std::size_t tau_index, int n_max) {
  const TauLimit lim = profile.limit(tau_index, n_max);
  if (!lim.has_derivatives) throw std::invalid_argument("limit_branch needs a tau stencil (tau too small)");
  const HPReal tau = profile.tau_grid.at(tau_index).at(lim.sigma.value.precision());
  HPReal res = abs(square(lim.r.value) - (lim.sigma.value - tau * lim.dsigma()));
  return {std::move(res), lim.r.value.sign()};
}

}  // namespace guegap
