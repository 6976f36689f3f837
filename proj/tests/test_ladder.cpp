#include <doctest.h>

#include <vector>

#include "guegap/errors.hpp"
#include "guegap/ladder.hpp"
#include "guegap/moments.hpp"
#include "guegap/ortho.hpp"
#include "support/checks.hpp"
#include "support/quadrature.hpp"

using namespace guegap;
using guegap::testing::bits;
using guegap::testing::num;
using guegap::testing::rel_err;
using guegap::testing::tenpow;

namespace {

struct Setup {
  RecurrenceTable table;
  AuxSequence aux;
};

Setup setup(const char* A, const char* B, const char* a, long b, int n_max) {
  const auto w = WeightParams::parse(A, B, a, bits(b));
  auto t = build_recurrence(build_table(w, n_max), n_max);
  auto x = build_aux(t);
  return {std::move(t), std::move(x)};
}

const HPReal& R(const Setup& s, int n) { return s.aux.R[static_cast<std::size_t>(n)]; }
const HPReal& r(const Setup& s, int n) { return s.aux.r[static_cast<std::size_t>(n)]; }

std::vector<HPReal> z_sample(Precision p) {
  std::vector<HPReal> out;
  for (const char* s : {"-2.3", "-0.21", "0.13", "0.97", "1.8"}) out.push_back(num(s, p));
  return out;
}

}  // namespace

TEST_CASE("auxiliary sequence basics") {
  const auto g = setup("1", "0", "0.7", 256, 10);
  for (int n = 0; n <= 10; ++n) {
    CHECK(R(g, n).is_zero());
    CHECK(r(g, n).is_zero());
  }
  const auto j = setup("0", "1", "1", 256, 10);
  CHECK(r(j, 0).is_zero());
  const auto p = bits(256);
  const HPReal one(1L, p);
  const HPReal mu0 = ldexp(testing::integrate_to_infinity([](const HPReal& x) { return exp(-square(x)); }, one, p), 1);
  CHECK(rel_err(R(j, 0), ldexp(exp(-one), 1) / mu0) < tenpow(70, p));
  for (int n = 0; n <= 10; ++n) CHECK(R(j, n).sign() > 0);
  const auto m = setup("1", "-1", "0.8", 256, 10);
  for (int n = 0; n <= 10; ++n) CHECK(R(m, n).sign() < 0);
}

TEST_CASE("An_Bn") {
  const auto p = bits(256);
  const auto g = setup("1", "0", "0.7", 256, 5);
  const auto [A0, B0] = An_Bn(g.aux, 3, num("0.2", p));
  CHECK(A0 == 2);
  CHECK(B0.is_zero());

  const auto j = setup("0", "1", "1", 256, 5);
  const auto [A2, B2] = An_Bn(j.aux, 2, HPReal(2L, p));
  CHECK(rel_err(A2, R(j, 2) / 3 + 2) < tenpow(70, p));
  CHECK(rel_err(B2, r(j, 2) * 2 / 3) < tenpow(70, p));

  const HPReal big = num("1e20", p);
  const auto [Ab, Bb] = An_Bn(j.aux, 3, big);
  CHECK(abs(Ab - 2) < tenpow(35, p));
  CHECK(rel_err(Bb * big, r(j, 3)) < tenpow(35, p));

  CHECK_THROWS_AS(An_Bn(j.aux, 2, num("1.0000000001", p)), PoleAtJump);
  CHECK_THROWS_AS(An_Bn(j.aux, 2, num("-1", p)), PoleAtJump);
  LadderOptions wide;
  wide.pole_radius = num("0.5", p);
  CHECK_THROWS_AS(An_Bn(j.aux, 2, num("1.2", p), wide), PoleAtJump);
  CHECK_NOTHROW(An_Bn(j.aux, 2, num("1.2", p)));
  CHECK(default_pole_radius(j.aux.params) == num("1e-6", p));
  CHECK(default_pole_radius(WeightParams(0.0, 1.0, 4.0, p)) == num("4e-6", p));
}

TEST_CASE("lowering and raising operators") {
  const auto p = bits(512);
  const auto g = setup("1", "0", "0.5", 512, 6);
  CHECK(check_lowering(g.table, g.aux, 3, num("0.7", p)) < tenpow(150, p));
  CHECK(check_raising(g.table, g.aux, 2, num("0.3", p)) < tenpow(150, p));

  const auto j = setup("0", "1", "0.5", 512, 8);
  CHECK(check_lowering(j.table, j.aux, 5, num("1.3", p)) < tenpow(40, p));
  CHECK(check_lowering(j.table, j.aux, 1, HPReal(2L, p)) < tenpow(140, p));
  CHECK(check_raising(j.table, j.aux, 1, num("-0.77", p)) < tenpow(140, p));

  const auto m = setup("1", "-1", "1", 512, 8);
  CHECK(check_raising(m.table, m.aux, 4, num("0.9", p)) < tenpow(40, p));
  CHECK_THROWS_AS(check_lowering(m.table, m.aux, 4, HPReal(1L, p)), PoleAtJump);
}

TEST_CASE("supplementary conditions") {
  const auto p = bits(512);
  const auto g = setup("1", "0", "0.5", 512, 8);
  for (int n = 1; n <= 7; ++n) {
    const auto s = check_supplementary(g.aux, g.table, n, num("1.4", p));
    CHECK(s.s1 < tenpow(150, p));
    CHECK(s.s2 < tenpow(150, p));
    CHECK(s.s2p < tenpow(150, p));
  }
  const auto j = setup("0", "1", "0.5", 512, 8);
  const auto s = check_supplementary(j.aux, j.table, 6, HPReal(2L, p));
  CHECK(s.s1 < tenpow(40, p));
  CHECK(s.s2 < tenpow(40, p));
  CHECK(s.s2p < tenpow(40, p));
  const auto near = check_supplementary(j.aux, j.table, 4, num("0.501", p));
  CHECK(near.s1 < tenpow(140, p));
  CHECK_THROWS_AS(check_supplementary(j.aux, j.table, 8, HPReal(2L, p)), std::out_of_range);
}

TEST_CASE("difference relations") {
  const auto p = bits(512);
  const auto j = setup("0", "1", "0.5", 512, 30);
  CHECK(rel_err(j.aux.params.a() * R(j, 0), r(j, 1)) < tenpow(140, p));

  const auto g = setup("1", "0", "0.5", 512, 12);
  for (int n = 1; n <= 11; ++n) {
    const auto d = check_difference_relations(g.aux, g.table, n);
    CHECK(d.d.is_zero());
    CHECK(d.c.is_zero());
    CHECK(d.b.is_zero());
    CHECK(d.a < tenpow(140, p));
  }

  const auto m = setup("1", "-1", "0.8", 512, 12);
  const auto d = check_difference_relations(m.aux, m.table, 10);
  CHECK(d.d < tenpow(40, p));
  CHECK(d.c < tenpow(40, p));
  CHECK(d.b < tenpow(40, p));
  CHECK(d.a < tenpow(40, p));
  for (int n = 1; n <= 12; ++n) CHECK(check_combined_difference(m.aux, n) < tenpow(40, p));
}

TEST_CASE("p(n,a) from the auxiliary quantities") {
  const auto p = bits(512);
  for (const char* B : {"1", "-1"}) {
    const auto s = setup(B[0] == '-' ? "1" : "0", B, "0.6", 512, 30);
    CHECK(abs(p_from_aux(s.aux, s.table, 1)) < tenpow(140, p));
    for (int n = 2; n <= 30; ++n) {
      const HPReal& ref = s.table.p_coeff[static_cast<std::size_t>(n)];
      CHECK(rel_err(p_from_aux(s.aux, s.table, n), ref) < tenpow(40, p));
    }
  }
  const auto g = setup("1", "0", "0.5", 256, 4);
  CHECK_THROWS_AS(p_from_aux(g.aux, g.table, 3), AuxDegenerate);
}

TEST_CASE("second-order equation for P_n") {
  const auto p = bits(512);
  const auto g = setup("1", "0", "0.5", 512, 6);
  CHECK(check_ode_P(g.table, g.aux, 4, num("1.1", p)) < tenpow(140, p));
  const auto j = setup("0", "1", "0.5", 512, 8);
  CHECK(check_ode_P(j.table, j.aux, 6, num("1.7", p)) < tenpow(35, p));

  const auto m = setup("1", "-1", "0.8", 512, 8);
  const int n = 5;
  const HPReal& a = m.aux.params.a();
  CHECK(R(m, n).sign() < 0);
  const HPReal z0 = sqrt(square(a) - ldexp(a * R(m, n), -1));
  CHECK_THROWS_AS(check_ode_P(m.table, m.aux, n, z0), AnZero);
  CHECK_THROWS_AS(check_ode_P(m.table, m.aux, n, -a), PoleAtJump);
}

TEST_CASE("all ladder residuals on a z sample stay below 10^(-0.15 prec)") {
  for (long b : {256L, 512L}) {
    const auto p = bits(b);
    const HPReal tol = tenpow(static_cast<long>(0.15 * b), p);
    for (auto [A, B, a] : {std::tuple{"0", "1", "0.5"}, std::tuple{"1", "-1", "0.8"}, std::tuple{"2", "3", "1.1"}}) {
      const auto s = setup(A, B, a, b, 21);
      for (int n = 1; n <= 20; ++n) {
        for (const auto& z : z_sample(p)) {
          INFO("bits=" << b << " A=" << A << " B=" << B << " n=" << n << " z=" << z);
          CHECK(check_lowering(s.table, s.aux, n, z) < tol);
          CHECK(check_raising(s.table, s.aux, n, z) < tol);
          const auto sp = check_supplementary(s.aux, s.table, n, z);
          CHECK(sp.s1 < tol);
          CHECK(sp.s2 < tol);
          CHECK(sp.s2p < tol);
          try {
            CHECK(check_ode_P(s.table, s.aux, n, z) < tol);
          } catch (const AnZero&) {
          }
        }
      }
    }
  }
}

TEST_CASE("weight scaling leaves beta, R, r unchanged") {
  const auto p = bits(512);
  const auto base = setup("0.4", "1.3", "0.7", 512, 20);
  const auto w3 = base.aux.params.scaled(HPReal(3L, p));
  const auto t3 = build_recurrence(build_table(w3, 20), 20);
  const auto x3 = build_aux(t3);
  for (std::size_t n = 1; n <= 20; ++n) {
    CHECK(rel_err(t3.beta[n], base.table.beta[n]) < tenpow(60, p));
    CHECK(rel_err(x3.R[n], base.aux.R[n]) < tenpow(60, p));
    CHECK(rel_err(x3.r[n], base.aux.r[n]) < tenpow(60, p));
  }
}
