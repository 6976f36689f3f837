#ifndef GUEGAP_ERRORS_HPP
#define GUEGAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace guegap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weight parameters violate A >= 0, A + B >= 0, a >= 0, or the weight
/// vanishes identically.
class InvalidWeight : public Error {
 public:
  using Error::Error;
};

/// A pivot h_n no longer carries the required number of significant bits at
/// the working precision. Retry with more bits.
class PrecisionExhausted : public Error {
 public:
  PrecisionExhausted(int n, long prec_bits, double significant_bits, const std::string& context = {})
      : Error("precision exhausted at n=" + std::to_string(n) + " with " +
              std::to_string(prec_bits) + " bits (" + std::to_string(significant_bits) +
              " significant bits left)" + (context.empty() ? "" : " [" + context + "]")),
        n_(n),
        prec_bits_(prec_bits),
        significant_bits_(significant_bits) {}

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] long prec_bits() const { return prec_bits_; }
  [[nodiscard]] double significant_bits() const { return significant_bits_; }

 private:
  int n_;
  long prec_bits_;
  double significant_bits_;
};

/// Evaluation point too close to the jump z = +-a.
class PoleAtJump : public Error {
 public:
  using Error::Error;
};

/// A_n(z) = 0, so the coefficient Q_n of the second-order ODE is undefined.
class AnZero : public Error {
 public:
  using Error::Error;
};

/// R_n = 0: closed forms dividing by R_n are singular (B = 0 or P_n(a) = 0).
class AuxDegenerate : public Error {
 public:
  using Error::Error;
};

/// The beta difference equation hit a zero denominator.
class DivisionBreakdown : public Error {
 public:
  explicit DivisionBreakdown(int n)
      : Error("beta iteration denominator vanished at n=" + std::to_string(n)), n_(n) {}
  [[nodiscard]] int n() const { return n_; }

 private:
  int n_;
};

/// A denominator of one of the ODEs in a vanishes at the evaluation point.
class PoleInODE : public Error {
 public:
  using Error::Error;
};

}  // namespace guegap

#endif  // GUEGAP_ERRORS_HPP
