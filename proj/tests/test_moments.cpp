#include <doctest.h>

#include "guegap/errors.hpp"
#include "guegap/moments.hpp"
#include "guegap/special.hpp"
#include "support/checks.hpp"
#include "support/quadrature.hpp"

using namespace guegap;
using guegap::testing::bits;
using guegap::testing::num;
using guegap::testing::rel_err;
using guegap::testing::tenpow;

namespace {

// int_lo^hi x^{2m} e^{-x^2} dx, or to infinity when hi is null.
HPReal gauss_piece(long m, const HPReal& lo, const HPReal* hi, Precision prec) {
  auto f = [m](const HPReal& x) { return pow(x, 2 * m) * exp(-square(x)); };
  return hi ? testing::integrate(f, lo, *hi, prec) : testing::integrate_to_infinity(f, lo, prec);
}

HPReal moment_oracle(long m, const HPReal& A, const HPReal& B, const HPReal& a, Precision prec) {
  const HPReal zero(prec);
  HPReal inner = a.is_zero() ? HPReal(prec) : gauss_piece(m, zero, &a, prec);
  HPReal outer = gauss_piece(m, a, nullptr, prec);
  return ldexp(A * inner + (A + B) * outer, 1);
}

}  // namespace

TEST_CASE("WeightParams validation") {
  const auto p = bits(128);
  CHECK_NOTHROW(WeightParams(0.0, 1.0, 0.5, p));
  CHECK_NOTHROW(WeightParams(1.0, -1.0, 0.5, p));
  CHECK_NOTHROW(WeightParams(1.0, 0.0, 0.0, p));
  CHECK_THROWS_AS(WeightParams(-1.0, 1.0, 0.5, p), InvalidWeight);
  CHECK_THROWS_AS(WeightParams(1.0, -2.0, 0.5, p), InvalidWeight);
  CHECK_THROWS_AS(WeightParams(1.0, 0.0, -0.5, p), InvalidWeight);
  CHECK_THROWS_AS(WeightParams(0.0, 0.0, 0.5, p), InvalidWeight);
  CHECK_THROWS_AS(WeightParams(1.0, -1.0, 0.0, p), InvalidWeight);
  CHECK_THROWS_AS(WeightParams(1.0, 0.0, 0.5, bits(32)), std::invalid_argument);
  const auto w = WeightParams::parse("0.1", "2", "0.3", bits(512));
  CHECK(w.A() == num("0.1", bits(512)));
  CHECK(w.with_precision(bits(1024)).A().precision() == bits(1024));
}

TEST_CASE("tail integrals") {
  const auto p = bits(256);
  const HPReal sp = sqrt_pi(p);
  const HPReal tiny = num("1e-60", p);
  CHECK(rel_err(tail_integral(0, tiny, p), sp / 2) < tenpow(55, p));
  const HPReal one(1L, p);
  CHECK(rel_err(tail_integral(0, one, p), sp / 2 * erfc_hp(one, p)) < tenpow(70, p));
  // I_2(1) = (3 sqrt(pi)/8) erfc(1) + (3/4) e^{-1} + e^{-1}/2
  const HPReal e1 = exp(-one);
  const HPReal closed = sp * 3 / 8 * erfc_hp(one, p) + e1 * 5 / 4;
  CHECK(rel_err(tail_integral(2, one, p), closed) < tenpow(70, p));
  CHECK(rel_err(tail_integral(2, one, p), gauss_piece(2, one, nullptr, p)) < tenpow(70, p));
}

TEST_CASE("moment examples") {
  const auto p = bits(256);
  const HPReal sp = sqrt_pi(p);
  CHECK(rel_err(moment(0, WeightParams(1.0, 0.0, 0.7, p)), sp) < tenpow(75, p));
  CHECK(moment(1, WeightParams(0.0, 1.0, 0.7, p)).is_zero());
  CHECK(moment(7, WeightParams(1.0, -1.0, 0.7, p)).is_zero());
  const HPReal one(1L, p);
  CHECK(rel_err(moment(0, WeightParams(0.0, 1.0, 1.0, p)), sp * erfc_hp(one, p)) < tenpow(75, p));

  const auto t = build_table(WeightParams(1.0, 0.0, 0.3, p), 2);
  CHECK(t.max_order() == 2);
  CHECK(rel_err(t.moment(0), sp) < tenpow(75, p));
  CHECK(rel_err(t.moment(2), sp / 2) < tenpow(75, p));
  CHECK(rel_err(t.moment(4), sp * 3 / 4) < tenpow(75, p));
  CHECK(t.moment(3).is_zero());
  CHECK_THROWS_AS(t.moment(5), std::out_of_range);
}

TEST_CASE("moments agree with quadrature for m <= 12") {
  const auto p = bits(256);
  struct Case {
    double A, B, a;
  };
  for (const Case c : {Case{0, 1, 0.5}, Case{1, -1, 0.8}, Case{2, 3, 1.7}, Case{0.5, 0, 1.0}}) {
    const WeightParams w(c.A, c.B, c.a, p);
    const auto t = build_table(w, 12);
    for (long m = 0; m <= 12; ++m) {
      INFO("A=" << c.A << " B=" << c.B << " a=" << c.a << " m=" << m);
      const HPReal oracle = moment_oracle(m, w.A(), w.B(), w.a(), p);
      CHECK(rel_err(t.mu_even[static_cast<std::size_t>(m)], oracle) < tenpow(static_cast<long>(256 * 0.3 * 0.9), p));
      CHECK(rel_err(moment(static_cast<int>(2 * m), w), t.mu_even[static_cast<std::size_t>(m)]) <
            ldexp(HPReal(1L, p), -250));
    }
  }
}

TEST_CASE("linearity in the weight") {
  const auto p = bits(512);
  const auto a = num("0.9", p);
  const auto A = num("0.3", p);
  const auto B = num("1.7", p);
  const auto mixed = build_table(WeightParams(A, B, a, p), 30);
  const auto pure = build_table(WeightParams(HPReal(1L, p), HPReal(0L, p), a, p), 30);
  const auto jump = build_table(WeightParams(HPReal(0L, p), HPReal(1L, p), a, p), 30);
  for (std::size_t m = 0; m <= 30; ++m) {
    CHECK(rel_err(mixed.mu_even[m], A * pure.mu_even[m] + B * jump.mu_even[m]) < tenpow(140, p));
  }
}

TEST_CASE("(1,-1) moments have no cancellation loss") {
  // mu_{2m}(1,-1,a) = 2 int_0^a x^{2m} e^{-x^2}; compare with quadrature for small a.
  const auto p = bits(256);
  const auto a = num("0.05", p);
  const auto t = build_table(WeightParams(HPReal(1L, p), HPReal(-1L, p), a, p), 10);
  for (long m = 0; m <= 10; ++m) {
    const HPReal oracle = ldexp(gauss_piece(m, HPReal(p), &a, p), 1);
    CHECK(rel_err(t.mu_even[static_cast<std::size_t>(m)], oracle) < tenpow(70, p));
  }
}

TEST_CASE("jump moments decrease in a and approach the Gaussian for large a") {
  const auto p = bits(128);
  for (int m = 0; m <= 5; ++m) {
    HPReal prev = moment(2 * m, WeightParams(0.0, 1.0, 0.05, p));
    for (int k = 2; k <= 40; ++k) {
      const HPReal cur = moment(2 * m, WeightParams(0.0, 1.0, 0.05 * k, p));
      CHECK(cur < prev);
      prev = cur;
    }
  }
  const auto far = build_table(WeightParams(1.0, -1.0, 12.0, p), 4);
  const auto gauss = build_table(WeightParams(1.0, 0.0, 12.0, p), 4);
  for (std::size_t m = 0; m <= 4; ++m) CHECK(rel_err(far.mu_even[m], gauss.mu_even[m]) < tenpow(30, p));
}

TEST_CASE("a = 0 limit is the (A+B)-Gaussian") {
  const auto p = bits(128);
  const auto t = build_table(WeightParams(0.0, 1.0, 0.0, p), 3);
  const auto g = build_table(WeightParams(1.0, 0.0, 0.0, p), 3);
  for (std::size_t m = 0; m <= 3; ++m) CHECK(rel_err(t.mu_even[m], g.mu_even[m]) < tenpow(35, p));
}
