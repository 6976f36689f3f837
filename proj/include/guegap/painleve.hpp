#ifndef GUEGAP_PAINLEVE_HPP
#define GUEGAP_PAINLEVE_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "guegap/hpreal.hpp"
#include "guegap/ladder.hpp"
#include "guegap/moments.hpp"
#include "guegap/ortho.hpp"

namespace guegap {

/// Uniform grid in the jump position a; values[k] = a_min + k h.
struct AGrid {
  HPReal a_min;
  HPReal a_max;
  HPReal h;
  std::vector<HPReal> values;

  /// Points a_min, a_min + h, ... up to a_max (inclusive within h/1000).
  static AGrid uniform(const HPReal& a_min, const HPReal& a_max, const HPReal& h);
  /// 2w+1 points a0 + k h, k = -w..w.
  static AGrid centered(const HPReal& a0, const HPReal& h, int half_width);
  /// "a_min:a_max:h", each parsed directly at `prec`.
  static AGrid parse(std::string_view spec, Precision prec);

  [[nodiscard]] std::size_t size() const { return values.size(); }
};

struct GridPoint {
  HPReal a;
  RecurrenceTable table;
  AuxSequence aux;
};

/// Recurrence tables and auxiliary sequences (n = 0..n_max) at every grid
/// point, for fixed A, B. Points are computed independently.
struct GridData {
  WeightParams params;
  int n_max = 0;
  AGrid grid;
  std::vector<GridPoint> points;
};

GridData build_grid_data(const WeightParams& params, int n_max, const AGrid& grid,
                         const EscalationPolicy& policy = {}, unsigned workers = 0);

/// beta_0..beta_N from the nonlinear difference equation
///   a^2 (2b_n - n)^2 = b_n (2b_n + 2b_{n+1} - 2n - 1)(2b_n + 2b_{n-1} - 2n + 1),
/// solved for b_{n+1}, with b_0 = 0 and b_1 = 1/2 + B a e^{-a^2} / mu_0.
/// When a = 0 or B = 0 the weight is a multiple of e^{-x^2}, the equation
/// degenerates to 0 = 0, and b_n = n/2 is returned.
/// Throws DivisionBreakdown(n) when b_n or 2b_n + 2b_{n-1} - 2n + 1 vanishes.
std::vector<HPReal> iterate_beta(const WeightParams& params, int N);

/// Residuals at a subset of grid points.
struct ResidualSeries {
  std::vector<HPReal> a;
  std::vector<HPReal> values;

  [[nodiscard]] HPReal max() const;
  [[nodiscard]] std::size_t size() const { return values.size(); }
};

/// d/da ln h_n = -R_n and d/da p(n,a) = a r_n - beta_n R_n, with central
/// differences; O(h^2). Interior points only.
struct InARelations {
  ResidualSeries lnh;
  ResidualSeries p;
};
InARelations diff_relations_in_a(const GridData& data, int n);

/// r_n' = 2r_n^2/R_n - (n + r_n)R_n and
/// R_n' = R_n^2 + 4r_n - 2aR_n - 2r_nR_n/a. Throws AuxDegenerate if R_n = 0.
struct RiccatiResiduals {
  ResidualSeries r;
  ResidualSeries R;
};
RiccatiResiduals riccati_residuals(const GridData& data, int n);

/// r_n against a R_n' / (2(2a - R_n)) + a R_n / 2 with finite-difference R_n'.
ResidualSeries r_from_R_consistency(const GridData& data, int n);

/// Second-order equations for R_n, r_n and beta_n. Second derivatives use the
/// 5-point stencil, so the two outermost points on each side are dropped.
/// Throws AuxDegenerate if R_n = 0, PoleInODE if 2a = R_n.
struct SecondOrderResiduals {
  ResidualSeries R_ode;
  ResidualSeries r_ode;
  ResidualSeries beta_ode;
};
SecondOrderResiduals second_order_residuals(const GridData& data, int n);

/// The beta_n equation alone; it stays meaningful for B = 0.
ResidualSeries beta_ode_residuals(const GridData& data, int n);

/// R_n recovered from r_n, r_n' as (-r' +- sqrt(r'^2 + 8r^2(n+r))) / (2(n+r)).
/// For each point the sign whose root is closer to the direct R_n is
/// recorded; `flips` counts sign changes along the grid.
struct BranchReport {
  std::vector<HPReal> a;
  std::vector<int> sign;
  ResidualSeries matched;
  ResidualSeries other;
  int flips = 0;
};
BranchReport root_branch(const GridData& data, int n);

enum class DerivRoute { ClosedForm, FiniteDifference };

/// sigma_n(a) = a d/da ln D_n(a) on the grid, without the two outermost points
/// on each side.
///   sigma:        route 1, -a sum_{j<n} R_j
///   sigma_route2: 4p(n,a) + n(n-1) - r_n
///   sigma1:       4a r_n - R_n(n + r_n) - 2r_n^2/R_n, or a central
///                 difference of sigma where R_n = 0
///   sigma2:       central difference of sigma1
struct SigmaSeries {
  WeightParams params;
  int n = 0;
  HPReal h;
  std::vector<HPReal> a_grid;
  std::vector<HPReal> sigma;
  std::vector<HPReal> sigma_route2;
  std::vector<HPReal> sigma1;
  std::vector<HPReal> sigma2;
  std::vector<HPReal> r;
  std::vector<DerivRoute> sigma1_route;

  [[nodiscard]] std::size_t size() const { return a_grid.size(); }
};
SigmaSeries sigma_series(const GridData& data, int n);

/// relative_residual(route 1, route 2) per point.
ResidualSeries sigma_route_agreement(const SigmaSeries& series);

/// r_n^2 = 2a^2 r_n + sigma_n - a sigma_n', relative residual per point.
ResidualSeries sigma_r_identity(const SigmaSeries& series);

/// Normalized residual |L - R| / (|L| + |R| + 1) of the second-order,
/// fourth-degree equation for sigma_n at a single point.
HPReal sigma_ode_point(const HPReal& a, int n, const HPReal& s, const HPReal& s1, const HPReal& s2);

ResidualSeries sigma_ode_residual(const SigmaSeries& series);

/// coarse / fine; about 4 for an O(h^2) residual when h is halved.
HPReal richardson_ratio(const HPReal& coarse, const HPReal& fine);

}  // namespace guegap

#endif  // GUEGAP_PAINLEVE_HPP
