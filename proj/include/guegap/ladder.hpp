#ifndef GUEGAP_LADDER_HPP
#define GUEGAP_LADDER_HPP

#include <optional>
#include <utility>
#include <vector>

#include "guegap/hpreal.hpp"
#include "guegap/ortho.hpp"

namespace guegap {

/// Auxiliary quantities at the jump point, for n = 0..n_max:
///   R_n = 2B P_n(a)^2 e^{-a^2} / h_n
///   r_n = 2B P_n(a) P_{n-1}(a) e^{-a^2} / h_{n-1},  r_0 = 0.
struct AuxSequence {
  WeightParams params;
  int n_max = 0;
  std::vector<HPReal> R;
  std::vector<HPReal> r;
};

AuxSequence build_aux(const RecurrenceTable& table);

/// Evaluation points with |z^2 - a^2| below this are rejected (PoleAtJump).
/// Default: 1e-6 * max(1, a).
HPReal default_pole_radius(const WeightParams& params);

struct LadderOptions {
  /// Unset means default_pole_radius.
  std::optional<HPReal> pole_radius;

  [[nodiscard]] HPReal radius(const WeightParams& params) const;
};

/// A_n(z) = a R_n / (z^2 - a^2) + 2,  B_n(z) = z r_n / (z^2 - a^2).
std::pair<HPReal, HPReal> An_Bn(const AuxSequence& aux, int n, const HPReal& z, const LadderOptions& opt = {});

/// |LHS - RHS| / max(1, |LHS|) for P_n' = -B_n P_n + beta_n A_n P_{n-1}.
HPReal check_lowering(const RecurrenceTable& table, const AuxSequence& aux, int n, const HPReal& z,
                      const LadderOptions& opt = {});

/// Same normalization for P_{n-1}' - 2z P_{n-1} - B_n P_{n-1} = -A_{n-1} P_n.
HPReal check_raising(const RecurrenceTable& table, const AuxSequence& aux, int n, const HPReal& z,
                     const LadderOptions& opt = {});

struct SupplementaryResiduals {
  HPReal s1;   // B_n + B_{n+1} = z A_n - 2z
  HPReal s2;   // 1 + z (B_{n+1} - B_n) = beta_{n+1} A_{n+1} - beta_n A_{n-1}
  HPReal s2p;  // sum_{j<n} A_j + B_n^2 + 2z B_n = beta_n A_n A_{n-1}
};
/// Needs 1 <= n <= n_max - 1.
SupplementaryResiduals check_supplementary(const AuxSequence& aux, const RecurrenceTable& table, int n,
                                           const HPReal& z, const LadderOptions& opt = {});

struct DifferenceResiduals {
  HPReal d;  // r_n + r_{n+1} = a R_n
  HPReal c;  // r_n^2 = beta_n R_n R_{n-1}
  HPReal b;  // a sum_{j<n} R_j + r_n^2 + 2a^2 r_n = 2a beta_n (R_n + R_{n-1})
  HPReal a;  // 2 beta_n = n + r_n
};
/// Relative residuals (relative_residual) for 1 <= n <= n_max - 1.
DifferenceResiduals check_difference_relations(const AuxSequence& aux, const RecurrenceTable& table, int n);

/// Relative residual of 2 r_n^2 = (r_n + n) R_n R_{n-1}, n >= 1.
HPReal check_combined_difference(const AuxSequence& aux, int n);

/// p(n, a) from the auxiliary quantities:
///   -a/4 (n + r_n) R_n - a r_n^2 / (2 R_n) + r_n^2/4 + a^2 r_n / 2 + r_n/4 - (n^2 - n)/4.
/// Throws AuxDegenerate when R_n = 0.
HPReal p_from_aux(const AuxSequence& aux, const RecurrenceTable& table, int n);

/// Residual of P_n'' + Q_n P_n' + S_n P_n = 0 with
///   Q_n = -A_n'/A_n - 2z,
///   S_n = B_n' - (A_n'/A_n) B_n - 2z B_n - B_n^2 + beta_n A_n A_{n-1},
/// normalized by max(1, |P''|, |Q P'|, |S P|). Needs 1 <= n <= n_max.
/// Throws PoleAtJump near z = +-a and AnZero where A_n(z) vanishes.
HPReal check_ode_P(const RecurrenceTable& table, const AuxSequence& aux, int n, const HPReal& z,
                   const LadderOptions& opt = {});

}  // namespace guegap

#endif  // GUEGAP_LADDER_HPP
