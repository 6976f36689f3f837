#ifndef GUEGAP_ORTHO_HPP
#define GUEGAP_ORTHO_HPP

#include <utility>
#include <vector>

#include "guegap/hpreal.hpp"
#include "guegap/moments.hpp"

namespace guegap {

/// Per-n ledger of the monic orthogonal polynomials of an even weight.
///
/// Indexing is by n throughout: h[n], beta[n], p_coeff[n], Pa[n] for
/// n = 0..n_max, logD[n] = ln D_n for n = 0..n_max (logD[0] = 0, the empty
/// determinant). beta[0] = 0 and p_coeff[0] = p_coeff[1] = 0 by convention.
struct RecurrenceTable {
  WeightParams params;
  int n_max = 0;
  std::vector<HPReal> h;
  std::vector<HPReal> beta;
  std::vector<HPReal> logD;
  std::vector<HPReal> p_coeff;
  std::vector<HPReal> Pa;
  /// Estimated relative error of h[n], from a shadow run at higher precision.
  std::vector<double> h_rel_error;

  [[nodiscard]] Precision prec() const { return params.prec(); }
  /// Smallest number of trustworthy bits over all h_n.
  [[nodiscard]] double significant_bits() const;
};

struct OrthoOptions {
  /// Extra bits of the shadow run used to estimate the error envelope.
  long guard_bits = 64;
  /// A pivot with fewer trustworthy bits than this raises PrecisionExhausted.
  double min_significant_bits = 16.0;
};

/// Recurrence data for n = 0..n_max from the moment table, by the
/// even-weight Chebyshev (modified-moment) algorithm: with
/// s_{k,l} = int P_k x^l w, s_{k,l} = s_{k-1,l+1} - beta_{k-1} s_{k-2,l},
/// h_k = s_{k,k}, beta_k = h_k / h_{k-1}. Odd-parity entries vanish and are
/// skipped. O(n_max^2) operations.
///
/// The whole computation is repeated at prec + guard_bits and the two h_n are
/// compared; this gives h_rel_error. Throws PrecisionExhausted at the first n
/// where h_n is not positive or carries fewer than min_significant_bits.
/// Needs moments.max_order() >= n_max.
RecurrenceTable build_recurrence(const MomentTable& moments, int n_max, const OrthoOptions& options = {});

/// Doubles the working precision after each PrecisionExhausted, starting at
/// params.prec(), and gives up (rethrowing) once cap_bits would be exceeded.
struct EscalationPolicy {
  long cap_bits = 16384;
  OrthoOptions ortho{};
};

RecurrenceTable solve_recurrence(const WeightParams& params, int n_max, const EscalationPolicy& policy = {});

/// (P_n(z), P_{n-1}(z)) by the forward recurrence P_{k+1} = z P_k - beta_k P_{k-1}.
/// P_{-1} = 0.
std::pair<HPReal, HPReal> eval_poly(const RecurrenceTable& table, int n, const HPReal& z);

/// Values and first two z-derivatives of P_n and P_{n-1}, obtained by
/// differentiating the three-term recurrence (no finite differences).
struct PolyJet {
  HPReal P, dP, d2P;
  HPReal Pm1, dPm1, d2Pm1;
};
PolyJet eval_poly_jet(const RecurrenceTable& table, int n, const HPReal& z);

/// ln D_n = sum_{j<n} ln h_j.
HPReal hankel_logdet(const RecurrenceTable& table, int n);

/// ln det of the explicit n x n moment matrix, by Gaussian elimination with
/// partial pivoting at params.prec() + extra_bits. Independent of the
/// orthogonalization path; meant for cross-checks at small n.
/// Throws PrecisionExhausted when a pivot is not positive.
HPReal hankel_logdet_direct(const WeightParams& params, int n, long extra_bits = 64);

}  // namespace guegap

#endif  // GUEGAP_ORTHO_HPP
