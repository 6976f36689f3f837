#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "guegap/mc.hpp"
#include "guegap/ortho.hpp"
#include "support/checks.hpp"
#include "support/quadrature.hpp"

using namespace guegap;
using guegap::testing::bits;
using guegap::testing::num;
using guegap::testing::rel_err;
using guegap::testing::tenpow;

namespace {

// int_R x^k e^{-x^2} dx by quadrature
HPReal gauss_moment(long k, Precision p) {
  if (k % 2 != 0) return HPReal(p);
  const HPReal zero(p);
  return ldexp(testing::integrate_to_infinity([k](const HPReal& x) { return pow(x, k) * exp(-square(x)); }, zero, p), 1);
}

struct Stats {
  double mean = 0, var = 0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  for (double x : v) s.var += (x - s.mean) * (x - s.mean);
  s.var /= static_cast<double>(v.size() - 1);
  return s;
}

}  // namespace

TEST_CASE("normalization") {
  const auto p = bits(256);
  CHECK(rel_err(normalization(1, p).C, sqrt_pi(p)) < tenpow(70, p));
  CHECK(rel_err(normalization(2, p).C, ldexp(pi(p), -1)) < tenpow(70, p));
  // for the pure Gaussian weight D_n equals C_n
  for (int n : {3, 4, 7, 12, 16}) {
    const HPReal direct = exp(hankel_logdet_direct(WeightParams(1.0, 0.0, 0.5, p), n));
    INFO("n=" << n);
    CHECK(rel_err(normalization(n, p).C, direct) < tenpow(60, p));
  }
  CHECK(normalization(5, p).C.sign() > 0);
  CHECK_THROWS_AS(normalization(0, p), std::invalid_argument);
  CHECK_THROWS_AS(normalization(17, p), std::invalid_argument);
}

TEST_CASE("gap probabilities from determinants") {
  const auto p = bits(256);
  // n = 1: P(|x| > a) = erfc(a), P(|x| < a) = 1 - erfc(a)
  const HPReal a = num("0.8", p);
  const HPReal tail = ldexp(testing::integrate_to_infinity([](const HPReal& x) { return exp(-square(x)); }, a, p), 1) / sqrt_pi(p);
  CHECK(rel_err(gap_probability(1, a, GapCase::Complement), tail) < tenpow(60, p));
  CHECK(rel_err(gap_probability(1, a, GapCase::Bulk), 1L - tail) < tenpow(60, p));

  for (int n : {2, 4, 6}) {
    const HPReal direct = exp(hankel_logdet_direct(gap_weight(GapCase::Complement, a), n)) / normalization(n, p).C;
    CHECK(rel_err(gap_probability(n, a, GapCase::Complement), direct) < tenpow(50, p));
  }

  for (int n : {2, 4, 6}) {
    HPReal prev_c(1L, p), prev_b(p);
    for (const char* s : {"0.2", "0.4", "0.8", "1.2", "2", "3"}) {
      const HPReal x = num(s, p);
      const HPReal pc = gap_probability(n, x, GapCase::Complement);
      const HPReal pb = gap_probability(n, x, GapCase::Bulk);
      INFO("n=" << n << " a=" << std::string(s));
      CHECK(pc < prev_c);
      CHECK(pb > prev_b);
      CHECK(pc > 0);
      CHECK(pb < 1);
      prev_c = pc;
      prev_b = pb;
    }
  }
  CHECK(parse_gap_case("bulk") == GapCase::Bulk);
  CHECK(to_string(GapCase::Complement) == "complement");
  CHECK_THROWS_AS(parse_gap_case("inner"), std::invalid_argument);
}

TEST_CASE("sampled spectra") {
  std::mt19937_64 rng(11);
  std::vector<double> x1;
  for (int i = 0; i < 1000000; ++i) x1.push_back(sample_spectrum(1, rng)[0]);
  const Stats s1 = stats(x1);
  // var of the sample variance for a normal: 2 sigma^4 / (N - 1)
  CHECK(std::abs(s1.var - 0.5) < 4 * std::sqrt(2 * 0.25 / 1e6));
  CHECK(std::abs(s1.mean) < 4 * std::sqrt(0.5 / 1e6));

  // E[x1^2 + x2^2] under prod (x_i - x_j)^2 e^{-sum x^2} at n = 2
  const auto p = bits(64);
  const HPReal m0 = gauss_moment(0, p), m2 = gauss_moment(2, p), m4 = gauss_moment(4, p);
  const double expected = ((m4 * m0 + square(m2)) / (m2 * m0)).to_double();
  std::vector<double> tr;
  for (int i = 0; i < 200000; ++i) {
    const auto ev = sample_spectrum(2, rng);
    tr.push_back(ev[0] * ev[0] + ev[1] * ev[1]);
  }
  const Stats st = stats(tr);
  CHECK(std::abs(st.mean - expected) < 4 * std::sqrt(st.var / 200000.0));

  // x -> -x symmetry: two-sample KS between positive values and |negative| values
  std::vector<double> pos, neg;
  for (int i = 0; i < 50000; ++i) {
    for (double v : sample_spectrum(4, rng)) (v >= 0 ? pos : neg).push_back(std::abs(v));
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  double d = 0;
  std::size_t i = 0, j = 0;
  while (i < pos.size() && j < neg.size()) {
    if (pos[i] <= neg[j]) ++i; else ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / pos.size() - static_cast<double>(j) / neg.size()));
  }
  const double ne = static_cast<double>(pos.size()) * neg.size() / (pos.size() + neg.size());
  CHECK(d * std::sqrt(ne) < 1.95);  // 0.1% level

  auto sorted = sample_spectrum(6, rng);
  CHECK(std::is_sorted(sorted.begin(), sorted.end()));
  CHECK_THROWS_AS(sample_spectrum(0, rng), std::invalid_argument);
}

TEST_CASE("gap estimates") {
  const auto p = bits(128);
  for (auto c : {GapCase::Complement, GapCase::Bulk}) {
    const auto e = gap_estimate(4, 0.8, c, 200000, 7);
    const double exact = gap_probability(4, num("0.8", p), c).to_double();
    INFO("case=" << std::string(to_string(c)) << " p_hat=" << e.p_hat << " exact=" << exact);
    CHECK(std::abs(e.p_hat - exact) < 4 * e.std_err);
    CHECK(e.std_err == doctest::Approx(std::sqrt(e.p_hat * (1 - e.p_hat) / 200000.0)));
    CHECK(e.hits == static_cast<std::int64_t>(std::llround(e.p_hat * 200000)));
  }
  CHECK(gap_estimate(3, 1e-6, GapCase::Complement, 20000, 1).p_hat > 0.999);
  CHECK(gap_estimate(3, 10.0, GapCase::Bulk, 20000, 1).p_hat == 1.0);

  const auto a1 = gap_estimate(3, 0.6, GapCase::Bulk, 100000, 42, 1);
  const auto a4 = gap_estimate(3, 0.6, GapCase::Bulk, 100000, 42, 4);
  CHECK(a1.hits == a4.hits);
  CHECK(a1.p_hat == a4.p_hat);
  CHECK(gap_estimate(3, 0.6, GapCase::Bulk, 100000, 43, 4).hits != a1.hits);

  CHECK_THROWS_AS(gap_estimate(0, 0.5, GapCase::Bulk, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(gap_estimate(2, 0.0, GapCase::Bulk, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(gap_estimate(2, 0.5, GapCase::Bulk, 0, 1), std::invalid_argument);
}
