#include "guegap/hpreal.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <ostream>
#include <stdexcept>
#include <string>

namespace guegap {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

void check_precision(Precision prec) {
  if (prec.bits < MPFR_PREC_MIN || prec.bits > MPFR_PREC_MAX) {
    throw std::invalid_argument("precision out of MPFR range: " + std::to_string(prec.bits));
  }
}

}  // namespace

HPReal::HPReal(Precision prec) {
  check_precision(prec);
  mpfr_init2(v_, prec.bits);
  mpfr_set_zero(v_, 1);
  owns_ = true;
}

HPReal::HPReal(long value, Precision prec) : HPReal(prec) { mpfr_set_si(v_, value, kRnd); }

HPReal::HPReal(double value, Precision prec) : HPReal(prec) { mpfr_set_d(v_, value, kRnd); }

HPReal HPReal::parse(std::string_view text, Precision prec) {
  HPReal out(prec);
  const std::string buf(text);
  char* end = nullptr;
  // strtofr accepts leading whitespace; we do not.
  if (buf.empty() || std::isspace(static_cast<unsigned char>(buf.front()))) {
    throw std::invalid_argument("not a number: '" + buf + "'");
  }
  mpfr_strtofr(out.v_, buf.c_str(), &end, 10, kRnd);
  if (end == buf.c_str() || *end != '\0' || !mpfr_number_p(out.v_)) {
    throw std::invalid_argument("not a number: '" + buf + "'");
  }
  return out;
}

HPReal::HPReal(const HPReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, kRnd);
  owns_ = true;
}

HPReal::HPReal(HPReal&& other) noexcept {
  std::memcpy(static_cast<void*>(v_), static_cast<const void*>(other.v_), sizeof(mpfr_t));
  owns_ = other.owns_;
  other.owns_ = false;
}

HPReal& HPReal::operator=(const HPReal& other) {
  if (this == &other) return *this;
  if (!owns_) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    owns_ = true;
  } else if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
  }
  mpfr_set(v_, other.v_, kRnd);
  return *this;
}

HPReal& HPReal::operator=(HPReal&& other) noexcept {
  if (this == &other) return *this;
  if (owns_) mpfr_clear(v_);
  std::memcpy(static_cast<void*>(v_), static_cast<const void*>(other.v_), sizeof(mpfr_t));
  owns_ = other.owns_;
  other.owns_ = false;
  return *this;
}

HPReal::~HPReal() {
  if (owns_) mpfr_clear(v_);
}

HPReal HPReal::at(Precision prec) const {
  HPReal out(prec);
  mpfr_set(out.v_, v_, kRnd);
  return out;
}

void HPReal::widen_to(Precision prec) {
  if (prec.bits > mpfr_get_prec(v_)) mpfr_prec_round(v_, prec.bits, kRnd);
}

int roundtrip_digits(Precision prec) {
  return static_cast<int>(std::ceil(static_cast<double>(prec.bits) * 0.301)) + 2;
}

std::string HPReal::to_string(int digits) const {
  if (mpfr_zero_p(v_)) return mpfr_signbit(v_) ? "-0" : "0";
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  mpfr_exp_t exp10 = 0;
  char* s = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), v_, kRnd);
  std::string mant(s);
  mpfr_free_str(s);
  std::string out;
  std::size_t i = 0;
  if (mant[0] == '-') {
    out.push_back('-');
    i = 1;
  }
  out.push_back(mant[i]);
  if (mant.size() > i + 1) {
    out.push_back('.');
    out.append(mant, i + 1, std::string::npos);
  }
  out.push_back('e');
  out.append(std::to_string(static_cast<long>(exp10) - 1));
  return out;
}

std::string HPReal::to_string() const { return to_string(roundtrip_digits(precision())); }

#define GUEGAP_COMPOUND(op, fn, fn_si)                   \
  HPReal& HPReal::operator op(const HPReal & rhs) {      \
    widen_to(rhs.precision());                           \
    fn(v_, v_, rhs.v_, kRnd);                            \
    return *this;                                        \
  }                                                      \
  HPReal& HPReal::operator op(long rhs) {                \
    fn_si(v_, v_, rhs, kRnd);                            \
    return *this;                                        \
  }

GUEGAP_COMPOUND(+=, mpfr_add, mpfr_add_si)
GUEGAP_COMPOUND(-=, mpfr_sub, mpfr_sub_si)
GUEGAP_COMPOUND(*=, mpfr_mul, mpfr_mul_si)
GUEGAP_COMPOUND(/=, mpfr_div, mpfr_div_si)
#undef GUEGAP_COMPOUND

HPReal HPReal::operator-() const {
  HPReal out(precision());
  mpfr_neg(out.v_, v_, kRnd);
  return out;
}

#define GUEGAP_BINARY(op, fn, fn_si, fn_si_rev)                  \
  HPReal operator op(const HPReal & a, const HPReal & b) {       \
    HPReal out(max(a.precision(), b.precision()));               \
    fn(out.raw(), a.raw(), b.raw(), kRnd);                       \
    return out;                                                  \
  }                                                              \
  HPReal operator op(const HPReal & a, long b) {                 \
    HPReal out(a.precision());                                   \
    fn_si(out.raw(), a.raw(), b, kRnd);                          \
    return out;                                                  \
  }                                                              \
  HPReal operator op(long a, const HPReal & b) {                 \
    HPReal out(b.precision());                                   \
    fn_si_rev(out.raw(), a, b.raw());                            \
    return out;                                                  \
  }

namespace {
void add_rev(mpfr_ptr r, long a, mpfr_srcptr b) { mpfr_add_si(r, b, a, kRnd); }
void sub_rev(mpfr_ptr r, long a, mpfr_srcptr b) { mpfr_si_sub(r, a, b, kRnd); }
void mul_rev(mpfr_ptr r, long a, mpfr_srcptr b) { mpfr_mul_si(r, b, a, kRnd); }
void div_rev(mpfr_ptr r, long a, mpfr_srcptr b) { mpfr_si_div(r, a, b, kRnd); }
}  // namespace

GUEGAP_BINARY(+, mpfr_add, mpfr_add_si, add_rev)
GUEGAP_BINARY(-, mpfr_sub, mpfr_sub_si, sub_rev)
GUEGAP_BINARY(*, mpfr_mul, mpfr_mul_si, mul_rev)
GUEGAP_BINARY(/, mpfr_div, mpfr_div_si, div_rev)
#undef GUEGAP_BINARY

bool operator==(const HPReal& a, const HPReal& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }

std::partial_ordering operator<=>(const HPReal& a, const HPReal& b) {
  if (mpfr_unordered_p(a.raw(), b.raw())) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.raw(), b.raw());
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool operator==(const HPReal& a, long b) { return !mpfr_nan_p(a.raw()) && mpfr_cmp_si(a.raw(), b) == 0; }

std::partial_ordering operator<=>(const HPReal& a, long b) {
  if (mpfr_nan_p(a.raw())) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.raw(), b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool operator==(const HPReal& a, double b) {
  return !mpfr_nan_p(a.raw()) && !std::isnan(b) && mpfr_cmp_d(a.raw(), b) == 0;
}

std::partial_ordering operator<=>(const HPReal& a, double b) {
  if (mpfr_nan_p(a.raw()) || std::isnan(b)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_d(a.raw(), b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::ostream& operator<<(std::ostream& os, const HPReal& x) {
  const auto p = os.precision();
  return os << x.to_string(p > 0 ? static_cast<int>(p) : 6);
}

#define GUEGAP_UNARY(name, fn)                \
  HPReal name(const HPReal& x) {              \
    HPReal out(x.precision());                \
    fn(out.raw(), x.raw(), kRnd);             \
    return out;                               \
  }

GUEGAP_UNARY(abs, mpfr_abs)
GUEGAP_UNARY(sqrt, mpfr_sqrt)
GUEGAP_UNARY(exp, mpfr_exp)
GUEGAP_UNARY(log, mpfr_log)
GUEGAP_UNARY(square, mpfr_sqr)
#undef GUEGAP_UNARY

HPReal pow(const HPReal& x, long k) {
  HPReal out(x.precision());
  mpfr_pow_si(out.raw(), x.raw(), k, kRnd);
  return out;
}

HPReal ldexp(const HPReal& x, long k) {
  HPReal out(x.precision());
  mpfr_mul_2si(out.raw(), x.raw(), k, kRnd);
  return out;
}

HPReal max(const HPReal& a, const HPReal& b) { return (a >= b) ? a : b; }

HPReal pi(Precision prec) {
  HPReal out(prec);
  mpfr_const_pi(out.raw(), kRnd);
  return out;
}

HPReal sqrt_pi(Precision prec) {
  // One extra word keeps the final rounding the only one that matters.
  HPReal p = pi(prec + 64);
  return sqrt(p).at(prec);
}

HPReal ln2(Precision prec) {
  HPReal out(prec);
  mpfr_const_log2(out.raw(), kRnd);
  return out;
}

HPReal relative_residual(const HPReal& lhs, const HPReal& rhs) {
  HPReal scale = max(abs(lhs), abs(rhs));
  if (scale < 1) scale = HPReal(1L, scale.precision());
  return abs(lhs - rhs) / scale;
}

}  // namespace guegap
