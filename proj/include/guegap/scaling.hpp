#ifndef GUEGAP_SCALING_HPP
#define GUEGAP_SCALING_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "guegap/hpreal.hpp"
#include "guegap/moments.hpp"
#include "guegap/ortho.hpp"
#include "guegap/painleve.hpp"

namespace guegap {

struct ScalingOptions {
  /// Step of the tau stencil used for derivatives.
  double h_tau = 1e-3;
  /// Working precision at size n: base_bits + bits_per_n * n.
  long base_bits = 256;
  long bits_per_n = 3;
  EscalationPolicy policy{};
  unsigned workers = 0;
};

Precision scaling_precision(int n, const ScalingOptions& options);

/// a = tau / (2 sqrt(2n)) at the given precision.
HPReal tau_to_a(const HPReal& tau, int n, Precision prec);

/// The 9-point a-grid (a(tau) + k h_tau / (2 sqrt(2n)), k = -4..4) used for one
/// profile cell; empty when it would reach a <= 0.
std::vector<HPReal> cell_a_values(const HPReal& tau, int n, const ScalingOptions& options);

/// Finite-n data at one (n, tau). Derivatives are in tau, by 5-point
/// central differences on the cell grid (sigma'' differentiates the
/// closed-form sigma'). They are absent when the stencil would reach tau <= 0.
struct TauSample {
  HPReal sigma;
  HPReal r;
  HPReal Rs;  // sqrt(n) R_n
  bool has_derivatives = false;
  HPReal dsigma, d2sigma;
  HPReal dr, d2r;
  HPReal dRs, d2Rs;
  long prec_bits = 0;
};

/// Limit estimate from the (at most) three finest levels: the quadratic in
/// 1/n through them, evaluated at 1/n = 0. error is its distance from the
/// linear fit through the last two levels. order is the observed convergence
/// order log(q)/log(n3/n2), q = (v2 - v1)/(v3 - v2), or 0 when q <= 0.
struct Extrapolated {
  HPReal value;
  HPReal error;
  double order = 0.0;
};
Extrapolated richardson_extrapolate(const std::vector<HPReal>& levels, const std::vector<int>& n_values);

struct TauLimit {
  Extrapolated sigma, r, Rs;
  bool has_derivatives = false;
  std::vector<Extrapolated> derivs;  // dsigma, d2sigma, dr, d2r, dRs, d2Rs

  [[nodiscard]] const HPReal& dsigma() const { return derivs.at(0).value; }
  [[nodiscard]] const HPReal& d2sigma() const { return derivs.at(1).value; }
  [[nodiscard]] const HPReal& dr() const { return derivs.at(2).value; }
  [[nodiscard]] const HPReal& d2r() const { return derivs.at(3).value; }
  [[nodiscard]] const HPReal& dRs() const { return derivs.at(4).value; }
  [[nodiscard]] const HPReal& d2Rs() const { return derivs.at(5).value; }
};

struct ScalingProfile {
  WeightParams params;
  std::vector<HPReal> tau_grid;
  std::vector<int> n_list;
  ScalingOptions options;
  /// samples[i][j] for n_list[i], tau_grid[j].
  std::vector<std::vector<TauSample>> samples;

  [[nodiscard]] const HPReal& sigma_val(std::size_t n_index, std::size_t tau_index) const;
  [[nodiscard]] const HPReal& r_val(std::size_t n_index, std::size_t tau_index) const;
  [[nodiscard]] const HPReal& Rs_val(std::size_t n_index, std::size_t tau_index) const;

  /// Extrapolated limits at tau_grid[tau_index] from the levels n <= n_max
  /// (all levels when n_max <= 0).
  [[nodiscard]] TauLimit limit(std::size_t tau_index, int n_max = 0) const;
};

/// Runs moments -> recurrence -> auxiliary sequence -> sigma on each (n, tau)
/// cell. n_list must be strictly increasing with n >= 2; tau >= 0.
/// PrecisionExhausted is rethrown with the (n, tau) cell in its message.
ScalingProfile build_profile(const WeightParams& params_template, const std::vector<HPReal>& tau_grid,
                             const std::vector<int>& n_list, const ScalingOptions& options = {});

/// |L - R| / (|L| + |R| + 1) for (tau s'')^2 = -4 (s - tau s' - s'^2)(s - tau s').
HPReal pv_residual_point(const HPReal& tau, const HPReal& s, const HPReal& s1, const HPReal& s2);

/// The sigma-form equation on the extrapolated sigma(tau).
HPReal pv_residual(const ScalingProfile& profile, std::size_t tau_index, int n_max = 0);

/// Same equation on raw sigma_n at level n_list[n_index].
HPReal pv_residual_raw(const ScalingProfile& profile, std::size_t n_index, std::size_t tau_index);

/// Residuals of the limiting equations for R(tau) and r(tau) on extrapolated
/// data: (relative residual of the R'' equation, normalized residual of
/// 4r^2(r'^2 + r^2) - tau^2 (r'' + r)^2 = 0).
/// Throws PoleInODE when R = 0 or sqrt(2) R = tau.
std::pair<HPReal, HPReal> limit_ode_residuals(const ScalingProfile& profile, std::size_t tau_index, int n_max = 0);

/// Same equations evaluated on raw level data.
std::pair<HPReal, HPReal> limit_ode_residuals_raw(const ScalingProfile& profile, std::size_t n_index,
                                                  std::size_t tau_index);

/// |r^2 - (sigma - tau sigma')| on extrapolated data, and the sign of r.
struct BranchConsistency {
  HPReal residual;
  int r_sign = 0;
};
BranchConsistency limit_branch(const ScalingProfile& profile, std::size_t tau_index, int n_max = 0);

}  // namespace guegap

#endif  // GUEGAP_SCALING_HPP
