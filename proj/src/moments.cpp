#include "guegap/moments.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "guegap/errors.hpp"
#include "guegap/special.hpp"

namespace guegap {

namespace {

constexpr long kGuardBits = 32;

void validate(const HPReal& A, const HPReal& B, const HPReal& a) {
  if (!A.is_finite() || !B.is_finite() || !a.is_finite()) {
    throw InvalidWeight("weight parameters must be finite");
  }
  if (A < 0) throw InvalidWeight("A must be >= 0 (got " + A.to_string(12) + ")");
  if (A + B < 0) throw InvalidWeight("A + B must be >= 0 (got " + (A + B).to_string(12) + ")");
  if (a < 0) throw InvalidWeight("a must be >= 0 (got " + a.to_string(12) + ")");
  if (A.is_zero() && B.is_zero()) throw InvalidWeight("A = B = 0 gives an identically zero weight");
  if (a.is_zero() && (A + B).is_zero()) {
    throw InvalidWeight("a = 0 with A + B = 0 gives an identically zero weight");
  }
}

}  // namespace

WeightParams::WeightParams(const HPReal& A, const HPReal& B, const HPReal& a, Precision prec)
    : A_(A.at(prec)), B_(B.at(prec)), a_(a.at(prec)), prec_(prec) {
  if (prec < kMinPrecision) throw std::invalid_argument("precision below 64 bits");
  validate(A_, B_, a_);
}

WeightParams::WeightParams(double A, double B, double a, Precision prec)
    : WeightParams(HPReal(A, prec), HPReal(B, prec), HPReal(a, prec), prec) {}

WeightParams WeightParams::parse(std::string_view A, std::string_view B, std::string_view a, Precision prec) {
  return WeightParams(HPReal::parse(A, prec), HPReal::parse(B, prec), HPReal::parse(a, prec), prec);
}

WeightParams WeightParams::with_precision(Precision prec) const {
  WeightParams out;
  out.A_ = A_.at(prec);
  out.B_ = B_.at(prec);
  out.a_ = a_.at(prec);
  out.prec_ = prec;
  return out;
}

WeightParams WeightParams::with_a(const HPReal& a) const { return WeightParams(A_, B_, a, prec_); }

WeightParams WeightParams::scaled(const HPReal& lambda) const {
  return WeightParams(A_ * lambda, B_ * lambda, a_, prec_);
}

HPReal MomentTable::moment(int k) const {
  if (k < 0 || k > 2 * max_order()) throw std::out_of_range("moment order outside table");
  if (k % 2 != 0) return HPReal(params.prec());
  return mu_even[static_cast<std::size_t>(k / 2)];
}

std::vector<HPReal> tail_integrals(int max_m, const HPReal& a, Precision prec) {
  if (max_m < 0) throw std::invalid_argument("tail_integrals: max_m < 0");
  if (a < 0) throw std::invalid_argument("tail_integrals: a < 0");
  const Precision wp = prec + kGuardBits;
  const HPReal aw = a.at(wp);
  const HPReal half_gauss = ldexp(exp(-square(aw)), -1);  // e^{-a^2}/2

  std::vector<HPReal> out;
  out.reserve(static_cast<std::size_t>(max_m) + 1);
  HPReal I = ldexp(sqrt_pi(wp) * erfc_hp(aw, wp), -1);
  out.push_back(I.at(prec));
  HPReal apow = aw;  // a^{2m-1}
  const HPReal a2 = square(aw);
  for (int m = 1; m <= max_m; ++m) {
    if (m > 1) apow *= a2;
    I = apow * half_gauss + ldexp(I * (2 * m - 1), -1);
    out.push_back(I.at(prec));
  }
  return out;
}

HPReal tail_integral(int m, const HPReal& a, Precision prec) {
  if (m < 0) throw std::invalid_argument("tail_integral: m < 0");
  return tail_integrals(m, a, prec).back();
}

std::vector<HPReal> core_integrals(int max_m, const HPReal& a, Precision prec) {
  if (max_m < 0) throw std::invalid_argument("core_integrals: max_m < 0");
  if (a < 0) throw std::invalid_argument("core_integrals: a < 0");
  std::vector<HPReal> out(static_cast<std::size_t>(max_m) + 1, HPReal(prec));
  if (a.is_zero()) return out;

  const Precision wp = prec + kGuardBits;
  const HPReal aw = a.at(wp);
  const HPReal a2 = square(aw);
  const HPReal half_gauss = ldexp(exp(-a2), -1);

  // Kummer series: J_M = a^{2M+1} e^{-a^2}/2 * sum_k a^{2k} / prod_{j=0..k} (M + 1/2 + j).
  const HPReal s = HPReal(max_m, wp) + HPReal(0.5, wp);
  HPReal term = 1L / s;
  HPReal sum = term;
  for (long k = 1;; ++k) {
    term *= a2;
    term /= (s + k);
    sum += term;
    // Terms decrease once s + k > a^2; stop when the geometric tail is negligible.
    if (s + k > ldexp(a2, 1) && ldexp(term, wp.bits) <= sum) break;
    if (k > 100000000) throw std::logic_error("core_integrals: series failed to converge");
  }
  HPReal J = pow(aw, 2L * max_m + 1) * half_gauss * sum;
  out[static_cast<std::size_t>(max_m)] = J.at(prec);

  // J_{m-1} = 2/(2m-1) (J_m + a^{2m-1} e^{-a^2}/2)
  HPReal apow = pow(aw, 2L * max_m - 1);
  const HPReal inv_a2 = 1L / a2;
  for (int m = max_m; m >= 1; --m) {
    J = ldexp(J + apow * half_gauss, 1) / (2 * m - 1);
    out[static_cast<std::size_t>(m - 1)] = J.at(prec);
    apow *= inv_a2;
  }
  return out;
}

HPReal moment(int k, const WeightParams& params) {
  if (k < 0) throw std::invalid_argument("moment: k < 0");
  const Precision prec = params.prec();
  if (k % 2 != 0) return HPReal(prec);
  const int m = k / 2;
  if (params.B().is_zero()) return (params.A() * gamma_half(m, prec + kGuardBits)).at(prec);
  const Precision wp = prec + kGuardBits;
  const HPReal outer = params.A().at(wp) + params.B().at(wp);
  HPReal mu = ldexp(outer * tail_integrals(m, params.a(), wp).back(), 1);
  if (!params.A().is_zero()) mu += ldexp(params.A() * core_integrals(m, params.a(), wp)[static_cast<std::size_t>(m)], 1);
  return mu.at(prec);
}

MomentTable build_table(const WeightParams& params, int max_order) {
  if (max_order < 0) throw std::invalid_argument("build_table: max_order < 0");
  const Precision prec = params.prec();
  const Precision wp = prec + kGuardBits;
  MomentTable table{params, {}};
  table.mu_even.reserve(static_cast<std::size_t>(max_order) + 1);
  if (params.B().is_zero()) {
    // Pure Gaussian: A Gamma(m + 1/2), independent of a.
    for (int m = 0; m <= max_order; ++m) table.mu_even.push_back((params.A() * gamma_half(m, wp)).at(prec));
    return table;
  }
  const HPReal outer = params.A().at(wp) + params.B().at(wp);
  const auto tails = tail_integrals(max_order, params.a(), wp);
  std::vector<HPReal> cores;
  if (!params.A().is_zero()) cores = core_integrals(max_order, params.a(), wp);

  for (int m = 0; m <= max_order; ++m) {
    HPReal mu = ldexp(outer * tails[static_cast<std::size_t>(m)], 1);
    if (!cores.empty()) mu += ldexp(params.A() * cores[static_cast<std::size_t>(m)], 1);
    table.mu_even.push_back(mu.at(prec));
  }
  return table;
}

}  // namespace guegap
