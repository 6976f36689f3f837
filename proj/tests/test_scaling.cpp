#include <doctest.h>

#include <string>
#include <vector>

#include "guegap/errors.hpp"
#include "guegap/painleve.hpp"
#include "guegap/scaling.hpp"
#include "support/checks.hpp"

using namespace guegap;
using guegap::testing::bits;
using guegap::testing::num;
using guegap::testing::rel_err;
using guegap::testing::tenpow;

namespace {

std::vector<HPReal> taus(std::initializer_list<const char*> v, Precision p) {
  std::vector<HPReal> out;
  for (const char* s : v) out.push_back(num(s, p));
  return out;
}

const ScalingProfile& jump_profile() {
  static const ScalingProfile prof =
      build_profile(WeightParams(0.0, 1.0, 0.5, bits(256)), taus({"0", "0.5", "1", "2"}, bits(256)), {16, 32, 64, 128});
  return prof;
}

}  // namespace

TEST_CASE("extrapolation in 1/n") {
  const auto p = bits(256);
  std::vector<HPReal> v;
  const std::vector<int> ns{8, 16, 32, 64};
  for (int n : ns) {
    const HPReal x = 1L / HPReal(n, p);
    v.push_back(num("0.75", p) + x * 3 - square(x) * 5);
  }
  const auto e = richardson_extrapolate(v, ns);
  CHECK(abs(e.value - num("0.75", p)) < tenpow(70, p));
  CHECK(e.order > 0.8);
  CHECK(e.order < 1.2);
  CHECK(e.error > 1e-5);

  const auto one = richardson_extrapolate({v[3]}, {64});
  CHECK(one.value == v[3]);
  CHECK(one.error.is_zero());
  CHECK_THROWS_AS(richardson_extrapolate({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(richardson_extrapolate(v, {1, 2}), std::invalid_argument);
}

TEST_CASE("cell grid") {
  ScalingOptions opt;
  const auto p = scaling_precision(32, opt);
  CHECK(p.bits == 256 + 3 * 32);
  const auto g = cell_a_values(num("1", p), 32, opt);
  REQUIRE(g.size() == 9);
  CHECK(rel_err(g[4], 1L / num("16", p)) < tenpow(90, p));
  CHECK(rel_err(g[5] - g[4], HPReal(opt.h_tau, p) / 16) < tenpow(30, p));
  CHECK(cell_a_values(num("0.004", p), 32, opt).empty());
  CHECK(cell_a_values(HPReal(p), 32, opt).empty());
  CHECK(cell_a_values(num("0.0041", p), 32, opt).size() == 9);
}

TEST_CASE("B = 0 profile is identically zero") {
  const auto p = bits(256);
  const auto prof = build_profile(WeightParams(1.0, 0.0, 0.5, p), taus({"0", "1"}, p), {8, 16, 32});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(prof.sigma_val(i, j).is_zero());
      CHECK(prof.r_val(i, j).is_zero());
      CHECK(prof.Rs_val(i, j).is_zero());
    }
  }
  CHECK(pv_residual(prof, 1).is_zero());
  CHECK_THROWS_AS(limit_ode_residuals(prof, 1), PoleInODE);
}

TEST_CASE("tau = 0 column") {
  const auto& prof = jump_profile();
  for (std::size_t i = 0; i < prof.n_list.size(); ++i) {
    const auto& s = prof.samples[i][0];
    CHECK(s.sigma.is_zero());
    CHECK(!s.has_derivatives);
    CHECK(s.Rs.sign() > 0);
  }
  CHECK_THROWS_AS(pv_residual(prof, 0), std::invalid_argument);
  CHECK(!prof.limit(0).has_derivatives);
}

TEST_CASE("profile agrees with sigma_series on the cell grid") {
  const auto& prof = jump_profile();
  ScalingOptions opt;
  const int n = 32;
  const auto p = scaling_precision(n, opt);
  const auto a = cell_a_values(num("1", p), n, opt);
  AGrid grid = AGrid::centered(a[4], a[5] - a[4], 4);
  grid.values = a;
  const auto d = build_grid_data(WeightParams(0.0, 1.0, 0.5, p), n, grid, {}, 1);
  const auto s = sigma_series(d, n);
  CHECK(prof.sigma_val(1, 2) == s.sigma[2]);
  CHECK(prof.r_val(1, 2) == d.points[4].aux.r[n]);
  CHECK(prof.samples[1][2].prec_bits == p.bits);
}

TEST_CASE("finite-n data converge in the scaling limit") {
  const auto& prof = jump_profile();
  for (std::size_t j = 1; j < prof.tau_grid.size(); ++j) {
    INFO("tau index " << j);
    for (std::size_t i = 0; i + 2 < prof.n_list.size(); ++i) {
      const HPReal d1 = abs(prof.sigma_val(i + 1, j) - prof.sigma_val(i, j));
      const HPReal d2 = abs(prof.sigma_val(i + 2, j) - prof.sigma_val(i + 1, j));
      CHECK(d2 < d1);
      const HPReal q = d1 / d2;
      CHECK(q > 1.8);
      CHECK(q < 2.2);
    }
    for (std::size_t i = 0; i < prof.n_list.size(); ++i) {
      CHECK(prof.sigma_val(i, j).sign() < 0);
      CHECK(prof.Rs_val(i, j).sign() > 0);
      const HPReal ratio = abs(prof.r_val(i, j)) / prof.Rs_val(i, j);
      CHECK(ratio > 0.05);
      CHECK(ratio < 2);
    }
    const auto lim = prof.limit(j);
    CHECK(lim.sigma.order > 0.9);
    CHECK(lim.sigma.order < 1.1);
    // a 1/n tail puts the limit one level-difference beyond the finest level
    const HPReal tail = abs(lim.sigma.value - prof.sigma_val(3, j)) / abs(prof.sigma_val(3, j) - prof.sigma_val(2, j));
    CHECK(tail > 0.9);
    CHECK(tail < 1.1);
    CHECK(lim.sigma.error < abs(prof.sigma_val(3, j) - prof.sigma_val(2, j)) / 10);
  }
}

TEST_CASE("limit residuals decrease with n_max") {
  const auto& prof = jump_profile();
  for (std::size_t j = 1; j < prof.tau_grid.size(); ++j) {
    INFO("tau=" << prof.tau_grid[j]);
    const HPReal pv64 = pv_residual(prof, j, 64);
    const HPReal pv128 = pv_residual(prof, j, 128);
    CHECK(pv128 < pv64);
    CHECK(pv64 < 1e-5);
    CHECK(pv_residual(prof, j) == pv128);
    const auto [R64, r64] = limit_ode_residuals(prof, j, 64);
    const auto [R128, r128] = limit_ode_residuals(prof, j, 128);
    CHECK(R128 < R64);
    CHECK(r128 < r64);
    CHECK(R64 < 1e-4);
    CHECK(r64 < 1e-5);
    const auto b64 = limit_branch(prof, j, 64);
    const auto b128 = limit_branch(prof, j, 128);
    CHECK(b128.residual < b64.residual);
    CHECK(b128.residual < 1e-6);
    CHECK(b128.r_sign == -1);
    // raw finite-n residuals decay like 1/n, far slower than the extrapolated ones
    const HPReal raw = pv_residual_raw(prof, 3, j);
    CHECK(raw > pv128 * 100);
    CHECK(pv_residual_raw(prof, 2, j) > raw);
  }
}

TEST_CASE("PV point equation") {
  const auto p = bits(128);
  const HPReal z(p);
  CHECK(pv_residual_point(num("1.3", p), z, z, z).is_zero());
  // sigma = c tau with sigma' = c, sigma'' = 0: both sides vanish
  CHECK(pv_residual_point(num("1.3", p), num("0.26", p), num("0.2", p), z) < tenpow(35, p));
  CHECK(pv_residual_point(num("1.3", p), num("-0.5", p), num("-0.2", p), num("0.1", p)) > 1e-3);
}

TEST_CASE("profile argument checks and precision context") {
  const auto p = bits(256);
  const WeightParams w(0.0, 1.0, 0.5, p);
  CHECK_THROWS_AS(build_profile(w, taus({"1"}, p), {32, 16}), std::invalid_argument);
  CHECK_THROWS_AS(build_profile(w, taus({"1"}, p), {1, 16}), std::invalid_argument);
  CHECK_THROWS_AS(build_profile(w, taus({"-1"}, p), {16}), std::invalid_argument);
  CHECK_THROWS_AS(build_profile(w, {}, {16}), std::invalid_argument);

  ScalingOptions tight;
  tight.base_bits = 64;
  tight.bits_per_n = 0;
  tight.policy.cap_bits = 64;
  try {
    build_profile(w, taus({"1"}, p), {64}, tight);
    FAIL("expected PrecisionExhausted");
  } catch (const PrecisionExhausted& e) {
    const std::string what = e.what();
    CHECK(what.find("n=64") != std::string::npos);
    CHECK(what.find("tau=") != std::string::npos);
  }
}
