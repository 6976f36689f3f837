#ifndef GUEGAP_MOMENTS_HPP
#define GUEGAP_MOMENTS_HPP

#include <string_view>
#include <vector>

#include "guegap/hpreal.hpp"

namespace guegap {

/// Weight w(x) = e^{-x^2} (A + B theta(x^2 - a^2)).
///
/// Inside (-a, a) the weight is A e^{-x^2}, outside it is (A + B) e^{-x^2}.
/// a = 0 is accepted as the limit configuration (A + B) e^{-x^2}.
class WeightParams {
 public:
  /// Throws InvalidWeight unless A >= 0, A + B >= 0, a >= 0 and the weight is
  /// not identically zero. Values are rounded to `prec`.
  WeightParams(const HPReal& A, const HPReal& B, const HPReal& a, Precision prec);
  WeightParams(double A, double B, double a, Precision prec);
  /// Decimal strings are parsed directly at `prec`.
  static WeightParams parse(std::string_view A, std::string_view B, std::string_view a, Precision prec);

  [[nodiscard]] const HPReal& A() const { return A_; }
  [[nodiscard]] const HPReal& B() const { return B_; }
  [[nodiscard]] const HPReal& a() const { return a_; }
  [[nodiscard]] Precision prec() const { return prec_; }

  /// Same weight, different working precision. The parameter values keep
  /// their rounded-at-construction bits, so results at different precisions
  /// describe the same input.
  [[nodiscard]] WeightParams with_precision(Precision prec) const;
  /// Same (A, B), different jump location.
  [[nodiscard]] WeightParams with_a(const HPReal& a) const;
  /// (lambda A, lambda B, a).
  [[nodiscard]] WeightParams scaled(const HPReal& lambda) const;

 private:
  WeightParams() = default;
  HPReal A_{Precision{64}};
  HPReal B_{Precision{64}};
  HPReal a_{Precision{64}};
  Precision prec_{64};
};

/// Even moments mu_{2m} of the weight for m = 0..max_order. Odd moments are
/// zero and never stored.
struct MomentTable {
  WeightParams params;
  std::vector<HPReal> mu_even;

  [[nodiscard]] int max_order() const { return static_cast<int>(mu_even.size()) - 1; }
  /// mu_k for any k <= 2*max_order; odd k gives an exact zero.
  [[nodiscard]] HPReal moment(int k) const;
};

/// I_m(a) = int_a^inf x^{2m} e^{-x^2} dx, by the upward recursion
/// I_m = a^{2m-1} e^{-a^2}/2 + (2m-1)/2 I_{m-1}, I_0 = sqrt(pi)/2 erfc(a).
HPReal tail_integral(int m, const HPReal& a, Precision prec);
/// I_0..I_max in one pass.
std::vector<HPReal> tail_integrals(int max_m, const HPReal& a, Precision prec);

/// J_m(a) = int_0^a x^{2m} e^{-x^2} dx = gamma(m + 1/2, a^2)/2. The top order
/// comes from the Kummer series (positive terms) and the rest from the
/// downward recursion, which is also cancellation-free.
std::vector<HPReal> core_integrals(int max_m, const HPReal& a, Precision prec);

/// mu_k = int x^k w(x) dx. Odd k gives exactly zero; for k = 2m this equals
/// A Gamma(m+1/2) + 2B I_m(a), evaluated as 2A J_m(a) + 2(A+B) I_m(a) so both
/// terms are nonnegative.
HPReal moment(int k, const WeightParams& params);

/// mu_{2m} for m = 0..max_order at params.prec().
MomentTable build_table(const WeightParams& params, int max_order);

}  // namespace guegap

#endif  // GUEGAP_MOMENTS_HPP
