#ifndef GUEGAP_HPREAL_HPP
#define GUEGAP_HPREAL_HPP

#include <mpfr.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace guegap {

/// Mantissa size in bits. Every HPReal carries its own; nothing in the
/// library reads a global default.
struct Precision {
  mpfr_prec_t bits = 0;

  constexpr Precision() = default;
  constexpr explicit Precision(mpfr_prec_t b) : bits(b) {}

  friend constexpr bool operator==(Precision, Precision) = default;
  friend constexpr auto operator<=>(Precision, Precision) = default;
};

inline constexpr Precision kMinPrecision{64};

constexpr Precision max(Precision a, Precision b) { return a.bits >= b.bits ? a : b; }
constexpr Precision operator+(Precision a, mpfr_prec_t extra) { return Precision{a.bits + extra}; }

/// Arbitrary-precision binary float backed by MPFR.
///
/// Rounding is always round-to-nearest-even (MPFR_RNDN). A binary operation
/// on two HPReal values is evaluated at the larger of the two precisions;
/// an operation with a plain integer or double keeps the HPReal's precision.
/// Compound assignment widens the left operand when the right one is wider.
class HPReal {
 public:
  explicit HPReal(Precision prec);
  HPReal(long value, Precision prec);
  HPReal(int value, Precision prec) : HPReal(static_cast<long>(value), prec) {}
  HPReal(double value, Precision prec);

  /// Parses a decimal (or MPFR-syntax) string directly at `prec`; there is no
  /// intermediate double. Throws std::invalid_argument on malformed input.
  static HPReal parse(std::string_view text, Precision prec);

  HPReal(const HPReal& other);
  HPReal(HPReal&& other) noexcept;
  HPReal& operator=(const HPReal& other);
  HPReal& operator=(HPReal&& other) noexcept;
  ~HPReal();

  [[nodiscard]] Precision precision() const { return Precision{mpfr_get_prec(v_)}; }

  /// Copy rounded (or exactly widened) to another precision.
  [[nodiscard]] HPReal at(Precision prec) const;

  [[nodiscard]] double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  [[nodiscard]] long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  [[nodiscard]] int sign() const { return mpfr_sgn(v_); }
  [[nodiscard]] bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  [[nodiscard]] bool is_finite() const { return mpfr_number_p(v_) != 0; }
  /// Binary exponent e with |x| in [2^(e-1), 2^e); meaningless for zero.
  [[nodiscard]] long exponent() const { return static_cast<long>(mpfr_get_exp(v_)); }

  /// Scientific notation with `digits` significant decimal digits.
  [[nodiscard]] std::string to_string(int digits) const;
  /// Enough digits to round-trip at this precision: ceil(bits*0.301)+2.
  [[nodiscard]] std::string to_string() const;

  HPReal& operator+=(const HPReal& rhs);
  HPReal& operator-=(const HPReal& rhs);
  HPReal& operator*=(const HPReal& rhs);
  HPReal& operator/=(const HPReal& rhs);
  HPReal& operator+=(long rhs);
  HPReal& operator-=(long rhs);
  HPReal& operator*=(long rhs);
  HPReal& operator/=(long rhs);

  HPReal operator-() const;

  mpfr_ptr raw() { return v_; }
  [[nodiscard]] mpfr_srcptr raw() const { return v_; }

 private:
  void widen_to(Precision prec);

  mpfr_t v_;
  bool owns_ = false;
};

/// Digit count used for lossless decimal output.
int roundtrip_digits(Precision prec);

HPReal operator+(const HPReal& a, const HPReal& b);
HPReal operator-(const HPReal& a, const HPReal& b);
HPReal operator*(const HPReal& a, const HPReal& b);
HPReal operator/(const HPReal& a, const HPReal& b);

HPReal operator+(const HPReal& a, long b);
HPReal operator-(const HPReal& a, long b);
HPReal operator*(const HPReal& a, long b);
HPReal operator/(const HPReal& a, long b);
HPReal operator+(long a, const HPReal& b);
HPReal operator-(long a, const HPReal& b);
HPReal operator*(long a, const HPReal& b);
HPReal operator/(long a, const HPReal& b);

inline HPReal operator+(const HPReal& a, int b) { return a + static_cast<long>(b); }
inline HPReal operator-(const HPReal& a, int b) { return a - static_cast<long>(b); }
inline HPReal operator*(const HPReal& a, int b) { return a * static_cast<long>(b); }
inline HPReal operator/(const HPReal& a, int b) { return a / static_cast<long>(b); }
inline HPReal operator+(int a, const HPReal& b) { return static_cast<long>(a) + b; }
inline HPReal operator-(int a, const HPReal& b) { return static_cast<long>(a) - b; }
inline HPReal operator*(int a, const HPReal& b) { return static_cast<long>(a) * b; }
inline HPReal operator/(int a, const HPReal& b) { return static_cast<long>(a) / b; }

bool operator==(const HPReal& a, const HPReal& b);
std::partial_ordering operator<=>(const HPReal& a, const HPReal& b);
bool operator==(const HPReal& a, long b);
std::partial_ordering operator<=>(const HPReal& a, long b);
bool operator==(const HPReal& a, double b);
std::partial_ordering operator<=>(const HPReal& a, double b);
inline bool operator==(const HPReal& a, int b) { return a == static_cast<long>(b); }
inline std::partial_ordering operator<=>(const HPReal& a, int b) { return a <=> static_cast<long>(b); }

std::ostream& operator<<(std::ostream& os, const HPReal& x);

HPReal abs(const HPReal& x);
HPReal sqrt(const HPReal& x);
HPReal exp(const HPReal& x);
HPReal log(const HPReal& x);
HPReal square(const HPReal& x);
HPReal pow(const HPReal& x, long k);
/// x * 2^k, exact.
HPReal ldexp(const HPReal& x, long k);
HPReal max(const HPReal& a, const HPReal& b);

HPReal pi(Precision prec);
HPReal sqrt_pi(Precision prec);
HPReal ln2(Precision prec);

/// |a - b| / max(1, |a|, |b|); the normalization used by every identity
/// check in the library.
HPReal relative_residual(const HPReal& lhs, const HPReal& rhs);

}  // namespace guegap

#endif  // GUEGAP_HPREAL_HPP
