#include "guegap/painleve.hpp"

#include <optional>
#include <stdexcept>
#include <string>

#include "guegap/errors.hpp"
#include "guegap/parallel.hpp"

namespace guegap {

namespace {

const HPReal& at(const std::vector<HPReal>& v, int i) { return v[static_cast<std::size_t>(i)]; }

HPReal d1(const HPReal& fm1, const HPReal& fp1, const HPReal& h) { return (fp1 - fm1) / ldexp(h, 1); }

// 5-point second derivative, O(h^4).
HPReal d2(const HPReal& fm2, const HPReal& fm1, const HPReal& f0, const HPReal& fp1, const HPReal& fp2,
          const HPReal& h) {
  HPReal num = (fp1 + fm1) * 16 - (fp2 + fm2) - f0 * 30;
  return num / (square(h) * 12);
}

// |l - r| / (|l| + |r| + 1)
HPReal balanced_residual(const HPReal& l, const HPReal& r) { return abs(l - r) / (abs(l) + abs(r) + 1); }

void check_n(const GridData& data, int n, int lo, const char* what) {
  if (n < lo || n > data.n_max) {
    throw std::out_of_range(std::string(what) + ": n=" + std::to_string(n) + " outside the grid tables");
  }
}

void need_points(const GridData& data, std::size_t k, const char* what) {
  if (data.points.size() < k) {
    throw std::invalid_argument(std::string(what) + ": grid needs at least " + std::to_string(k) + " points");
  }
}

void require_R_nonzero(const GridData& data, int n, const char* what) {
  for (const auto& p : data.points) {
    if (at(p.aux.R, n).is_zero()) {
      throw AuxDegenerate(std::string(what) + ": R_" + std::to_string(n) + " = 0 at a=" + p.a.to_string(20));
    }
  }
}

struct Column {
  const GridData& data;
  int n;
  const HPReal& R(std::size_t i) const { return at(data.points[i].aux.R, n); }
  const HPReal& r(std::size_t i) const { return at(data.points[i].aux.r, n); }
  const HPReal& beta(std::size_t i) const { return at(data.points[i].table.beta, n); }
  const HPReal& a(std::size_t i) const { return data.points[i].a; }
};

}  // namespace

AGrid AGrid::uniform(const HPReal& a_min, const HPReal& a_max, const HPReal& h) {
  if (h.sign() <= 0) throw std::invalid_argument("grid step must be positive");
  if (a_min.sign() <= 0) throw std::invalid_argument("grid needs a_min > 0");
  if (a_max < a_min) throw std::invalid_argument("grid needs a_max >= a_min");
  const Precision prec = max(max(a_min.precision(), a_max.precision()), h.precision());
  const HPReal span = (a_max - a_min) / h;
  const double steps = span.to_double();
  if (steps > 1e7) throw std::invalid_argument("grid has too many points");
  const long count = static_cast<long>(steps + 1e-3) + 1;
  AGrid g{a_min.at(prec), a_max.at(prec), h.at(prec), {}};
  g.values.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) g.values.push_back(g.a_min + g.h * k);
  return g;
}

AGrid AGrid::centered(const HPReal& a0, const HPReal& h, int half_width) {
  if (half_width < 0) throw std::invalid_argument("half_width < 0");
  const Precision prec = max(a0.precision(), h.precision());
  const HPReal lo = a0.at(prec) - h * half_width;
  if (lo.sign() <= 0) throw std::invalid_argument("centered grid reaches a <= 0");
  AGrid g{lo, a0.at(prec) + h * half_width, h.at(prec), {}};
  for (int k = -half_width; k <= half_width; ++k) g.values.push_back(a0.at(prec) + h * k);
  return g;
}

AGrid AGrid::parse(std::string_view spec, Precision prec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos || spec.find(':', c2 + 1) != std::string_view::npos) {
    throw std::invalid_argument("grid must look like a_min:a_max:h, got '" + std::string(spec) + "'");
  }
  return uniform(HPReal::parse(spec.substr(0, c1), prec), HPReal::parse(spec.substr(c1 + 1, c2 - c1 - 1), prec),
                 HPReal::parse(spec.substr(c2 + 1), prec));
}

GridData build_grid_data(const WeightParams& params, int n_max, const AGrid& grid, const EscalationPolicy& policy,
                         unsigned workers) {
  std::vector<std::optional<GridPoint>> slots(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const WeightParams p = params.with_a(grid.values[i]);
    RecurrenceTable table = solve_recurrence(p, n_max, policy);
    AuxSequence aux = build_aux(table);
    slots[i].emplace(GridPoint{grid.values[i], std::move(table), std::move(aux)});
  });
  GridData data{params, n_max, grid, {}};
  data.points.reserve(slots.size());
  for (auto& s : slots) data.points.push_back(std::move(*s));
  return data;
}

std::vector<HPReal> iterate_beta(const WeightParams& params, int N) {
  if (N < 2) throw std::invalid_argument("iterate_beta needs N >= 2");
  const Precision prec = params.prec();
  std::vector<HPReal> b;
  b.reserve(static_cast<std::size_t>(N) + 1);
  const HPReal& a = params.a();
  if (a.is_zero() || params.B().is_zero()) {
    for (int n = 0; n <= N; ++n) b.push_back(ldexp(HPReal(n, prec), -1));
    return b;
  }
  const HPReal mu0 = moment(0, params);
  b.emplace_back(prec);
  b.push_back(ldexp(HPReal(1L, prec), -1) + params.B() * a * exp(-square(a)) / mu0);
  const HPReal a2 = square(a);
  for (int n = 1; n < N; ++n) {
    const HPReal& bn = at(b, n);
    const HPReal factor = ldexp(bn + at(b, n - 1), 1) - (2L * n - 1);
    if (bn.is_zero() || factor.is_zero()) throw DivisionBreakdown(n);
    const HPReal t = ldexp(bn, 1) - n;
    HPReal next = a2 * square(t) / (bn * factor) - ldexp(bn, 1) + (2L * n + 1);
    b.push_back(ldexp(next, -1));
  }
  return b;
}

HPReal ResidualSeries::max() const {
  if (values.empty()) throw std::logic_error("empty residual series");
  HPReal m = values.front();
  for (const auto& v : values) {
    if (v > m || !v.is_finite()) m = v;
    if (!m.is_finite()) break;
  }
  return m;
}

InARelations diff_relations_in_a(const GridData& data, int n) {
  check_n(data, n, 0, "diff_relations_in_a");
  need_points(data, 3, "diff_relations_in_a");
  const HPReal& h = data.grid.h;
  const Column c{data, n};
  InARelations out;
  for (std::size_t i = 1; i + 1 < data.points.size(); ++i) {
    const auto& lo = data.points[i - 1].table;
    const auto& hi = data.points[i + 1].table;
    const HPReal dlnh = d1(log(at(lo.h, n)), log(at(hi.h, n)), h);
    out.lnh.a.push_back(c.a(i));
    out.lnh.values.push_back(relative_residual(dlnh, -c.R(i)));
    const HPReal dp = d1(at(lo.p_coeff, n), at(hi.p_coeff, n), h);
    out.p.a.push_back(c.a(i));
    out.p.values.push_back(relative_residual(dp, c.a(i) * c.r(i) - c.beta(i) * c.R(i)));
  }
  return out;
}

RiccatiResiduals riccati_residuals(const GridData& data, int n) {
  check_n(data, n, 0, "riccati_residuals");
  need_points(data, 3, "riccati_residuals");
  require_R_nonzero(data, n, "riccati_residuals");
  const HPReal& h = data.grid.h;
  const Column c{data, n};
  RiccatiResiduals out;
  for (std::size_t i = 1; i + 1 < data.points.size(); ++i) {
    const HPReal& R = c.R(i);
    const HPReal& r = c.r(i);
    const HPReal& a = c.a(i);
    const HPReal dr = d1(c.r(i - 1), c.r(i + 1), h);
    const HPReal dR = d1(c.R(i - 1), c.R(i + 1), h);
    out.r.a.push_back(a);
    out.r.values.push_back(relative_residual(dr, ldexp(square(r), 1) / R - (r + n) * R));
    out.R.a.push_back(a);
    out.R.values.push_back(
        relative_residual(dR, square(R) + ldexp(r, 2) - ldexp(a * R, 1) - ldexp(r * R, 1) / a));
  }
  return out;
}

ResidualSeries r_from_R_consistency(const GridData& data, int n) {
  check_n(data, n, 0, "r_from_R_consistency");
  need_points(data, 3, "r_from_R_consistency");
  const HPReal& h = data.grid.h;
  const Column c{data, n};
  ResidualSeries out;
  for (std::size_t i = 1; i + 1 < data.points.size(); ++i) {
    const HPReal& a = c.a(i);
    const HPReal& R = c.R(i);
    const HPReal denom = ldexp(a, 1) - R;
    if (denom.is_zero()) throw PoleInODE("2a = R_n at a=" + a.to_string(20));
    const HPReal dR = d1(c.R(i - 1), c.R(i + 1), h);
    const HPReal r = a * dR / ldexp(denom, 1) + ldexp(a * R, -1);
    out.a.push_back(a);
    out.values.push_back(relative_residual(r, c.r(i)));
  }
  return out;
}

ResidualSeries beta_ode_residuals(const GridData& data, int n) {
  check_n(data, n, 0, "beta_ode_residuals");
  need_points(data, 5, "beta_ode_residuals");
  const HPReal& h = data.grid.h;
  const Column c{data, n};
  ResidualSeries out;
  for (std::size_t i = 2; i + 2 < data.points.size(); ++i) {
    const HPReal& a = c.a(i);
    const HPReal a2 = square(a);
    const HPReal& b = c.beta(i);
    const HPReal db = d1(c.beta(i - 1), c.beta(i + 1), h);
    const HPReal ddb = d2(c.beta(i - 2), c.beta(i - 1), b, c.beta(i + 1), c.beta(i + 2), h);
    const HPReal t = ldexp(b, 1) - n;  // 2b - n
    const HPReal lhs = ldexp(square(ldexp(b, 1) + a2 - n), 2) * (square(db) + ldexp(b * square(t), 2));
    const HPReal rhs = a2 * square(ddb + ldexp(t * (b * 6 - n), 1));
    out.a.push_back(a);
    out.values.push_back(balanced_residual(lhs, rhs));
  }
  return out;
}

SecondOrderResiduals second_order_residuals(const GridData& data, int n) {
  check_n(data, n, 0, "second_order_residuals");
  need_points(data, 5, "second_order_residuals");
  require_R_nonzero(data, n, "second_order_residuals");
  const HPReal& h = data.grid.h;
  const Column c{data, n};
  SecondOrderResiduals out;
  for (std::size_t i = 2; i + 2 < data.points.size(); ++i) {
    const HPReal& a = c.a(i);
    const HPReal a2 = square(a);
    const HPReal& R = c.R(i);
    const HPReal& r = c.r(i);
    const HPReal two_a_minus_R = ldexp(a, 1) - R;
    if (two_a_minus_R.is_zero()) throw PoleInODE("2a = R_n at a=" + a.to_string(20));

    const HPReal dR = d1(c.R(i - 1), c.R(i + 1), h);
    const HPReal ddR = d2(c.R(i - 2), c.R(i - 1), R, c.R(i + 1), c.R(i + 2), h);
    const HPReal rhsR = (a - R) / (two_a_minus_R * R) * square(dR) + R / (a * two_a_minus_R) * dR +
                        two_a_minus_R * (a2 - (2L * n + 1) - a * R) * R / a;
    out.R_ode.a.push_back(a);
    out.R_ode.values.push_back(relative_residual(ddR, rhsR));

    const HPReal dr = d1(c.r(i - 1), c.r(i + 1), h);
    const HPReal ddr = d2(c.r(i - 2), c.r(i - 1), r, c.r(i + 1), c.r(i + 2), h);
    const HPReal r2 = square(r);
    const HPReal lhs = ldexp(square(a2 + r), 2) * (square(dr) + ldexp(r2 * (r + n), 3));
    const HPReal rhs = a2 * square(ddr + ldexp(r, 3) * n + r2 * 12);
    out.r_ode.a.push_back(a);
    out.r_ode.values.push_back(balanced_residual(lhs, rhs));
  }
  out.beta_ode = beta_ode_residuals(data, n);
  return out;
}

BranchReport root_branch(const GridData& data, int n) {
  check_n(data, n, 1, "root_branch");
  need_points(data, 3, "root_branch");
  const HPReal& h = data.grid.h;
  const Column c{data, n};
  BranchReport out;
  for (std::size_t i = 1; i + 1 < data.points.size(); ++i) {
    const HPReal& r = c.r(i);
    const HPReal dr = d1(c.r(i - 1), c.r(i + 1), h);
    HPReal disc = square(dr) + ldexp(square(r) * (r + n), 3);
    if (disc.sign() < 0) disc = HPReal(disc.precision());
    const HPReal s = sqrt(disc);
    const HPReal denom = ldexp(r + n, 1);
    const HPReal plus = (s - dr) / denom;
    const HPReal minus = (-dr - s) / denom;
    HPReal rp = relative_residual(plus, c.R(i));
    HPReal rm = relative_residual(minus, c.R(i));
    const int sign = rp <= rm ? 1 : -1;
    if (!out.sign.empty() && out.sign.back() != sign) ++out.flips;
    out.a.push_back(c.a(i));
    out.sign.push_back(sign);
    out.matched.a.push_back(c.a(i));
    out.other.a.push_back(c.a(i));
    out.matched.values.push_back(sign > 0 ? rp : rm);
    out.other.values.push_back(sign > 0 ? std::move(rm) : std::move(rp));
  }
  return out;
}

SigmaSeries sigma_series(const GridData& data, int n) {
  check_n(data, n, 0, "sigma_series");
  need_points(data, 5, "sigma_series");
  const std::size_t N = data.points.size();
  const HPReal& h = data.grid.h;
  const Column c{data, n};

  std::vector<HPReal> s1;
  std::vector<HPReal> s2;
  std::vector<HPReal> sig;
  s1.reserve(N);
  sig.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto& aux = data.points[i].aux;
    HPReal sum(aux.params.prec());
    for (int j = 0; j < n; ++j) sum += at(aux.R, j);
    sig.push_back(-c.a(i) * sum);
  }
  std::vector<DerivRoute> route(N, DerivRoute::ClosedForm);
  for (std::size_t i = 0; i < N; ++i) {
    const HPReal& R = c.R(i);
    if (R.is_zero()) {
      route[i] = DerivRoute::FiniteDifference;
      s1.push_back(i == 0 || i + 1 == N ? HPReal(R.precision()) : d1(sig[i - 1], sig[i + 1], h));
      continue;
    }
    const HPReal& r = c.r(i);
    s1.push_back(ldexp(c.a(i) * r, 2) - R * (r + n) - ldexp(square(r), 1) / R);
  }

  SigmaSeries out{data.params, n, h, {}, {}, {}, {}, {}, {}, {}};
  for (std::size_t i = 2; i + 2 < N; ++i) {
    const auto& table = data.points[i].table;
    out.a_grid.push_back(c.a(i));
    out.sigma.push_back(sig[i]);
    out.sigma_route2.push_back(ldexp(at(table.p_coeff, n), 2) + static_cast<long>(n) * (n - 1) - c.r(i));
    out.sigma1.push_back(s1[i]);
    out.sigma2.push_back(d1(s1[i - 1], s1[i + 1], h));
    out.r.push_back(c.r(i));
    out.sigma1_route.push_back(route[i]);
  }
  return out;
}

ResidualSeries sigma_route_agreement(const SigmaSeries& series) {
  ResidualSeries out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    out.a.push_back(series.a_grid[i]);
    out.values.push_back(relative_residual(series.sigma[i], series.sigma_route2[i]));
  }
  return out;
}

ResidualSeries sigma_r_identity(const SigmaSeries& series) {
  ResidualSeries out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const HPReal& a = series.a_grid[i];
    const HPReal& r = series.r[i];
    out.a.push_back(a);
    out.values.push_back(
        relative_residual(square(r), ldexp(square(a) * r, 1) + series.sigma[i] - a * series.sigma1[i]));
  }
  return out;
}

HPReal sigma_ode_point(const HPReal& a, int n, const HPReal& s, const HPReal& s1, const HPReal& s2) {
  const HPReal a2 = square(a);
  const HPReal a4 = square(a2);
  const HPReal as1 = a * s1;
  const HPReal X = a4 + s - as1;
  const HPReal s2sq = square(s2);
  const HPReal lhs =
      square(a4 * a2 * 16 - a2 * s2sq - ldexp(X, 2) * (ldexp(a2, 2) + ldexp(s - as1, 3) * n - square(s1)));
  const HPReal f1 = ldexp(X * square(as1 - ldexp(s, 1)), 2) + ldexp(a2 * s2 * (as1 - s), 2) - a4 * s2sq;
  const HPReal f2 = ldexp((ldexp(a2, 1) * n + s) * X, 2) + ldexp(a4, 2) - a2 * s2;
  const HPReal rhs = ldexp(f1 * f2, 4);
  return balanced_residual(lhs, rhs);
}

ResidualSeries sigma_ode_residual(const SigmaSeries& series) {
  ResidualSeries out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    out.a.push_back(series.a_grid[i]);
    out.values.push_back(
        sigma_ode_point(series.a_grid[i], series.n, series.sigma[i], series.sigma1[i], series.sigma2[i]));
  }
  return out;
}

HPReal richardson_ratio(const HPReal& coarse, const HPReal& fine) {
  if (fine.is_zero()) throw std::domain_error("richardson_ratio: fine residual is zero");
  return coarse / fine;
}

}  // namespace guegap
