#include "guegap/ladder.hpp"

#include <stdexcept>
#include <string>

#include "guegap/errors.hpp"

namespace guegap {

namespace {

void check_n(const AuxSequence& aux, int n, int lo, int hi_offset, const char* what) {
  if (n < lo || n > aux.n_max - hi_offset) {
    throw std::out_of_range(std::string(what) + ": n=" + std::to_string(n) + " outside the supported range");
  }
}

// z^2 - a^2, rejecting evaluation points inside the exclusion radius.
HPReal pole_distance(const AuxSequence& aux, const HPReal& z, const LadderOptions& opt) {
  const HPReal& a = aux.params.a();
  HPReal d = square(z) - square(a);
  if (abs(d) < opt.radius(aux.params)) {
    throw PoleAtJump("z=" + z.to_string(20) + " is within the exclusion radius of the jump at +-a");
  }
  return d;
}

const HPReal& at(const std::vector<HPReal>& v, int i) { return v[static_cast<std::size_t>(i)]; }

}  // namespace

AuxSequence build_aux(const RecurrenceTable& table) {
  const WeightParams& params = table.params;
  const Precision prec = table.prec();
  AuxSequence aux{params, table.n_max, {}, {}};
  aux.R.reserve(static_cast<std::size_t>(table.n_max) + 1);
  aux.r.reserve(static_cast<std::size_t>(table.n_max) + 1);
  const HPReal twoBg = ldexp(params.B() * exp(-square(params.a())), 1);  // 2B e^{-a^2}
  for (int n = 0; n <= table.n_max; ++n) {
    aux.R.push_back(twoBg * square(at(table.Pa, n)) / at(table.h, n));
    if (n == 0) {
      aux.r.emplace_back(prec);
    } else {
      aux.r.push_back(twoBg * at(table.Pa, n) * at(table.Pa, n - 1) / at(table.h, n - 1));
    }
  }
  return aux;
}

HPReal default_pole_radius(const WeightParams& params) {
  HPReal scale = params.a() > 1 ? params.a() : HPReal(1L, params.prec());
  return scale * HPReal::parse("1e-6", params.prec());
}

HPReal LadderOptions::radius(const WeightParams& params) const {
  return pole_radius ? *pole_radius : default_pole_radius(params);
}

std::pair<HPReal, HPReal> An_Bn(const AuxSequence& aux, int n, const HPReal& z, const LadderOptions& opt) {
  check_n(aux, n, 0, 0, "An_Bn");
  const HPReal d = pole_distance(aux, z, opt);
  HPReal A = aux.params.a() * at(aux.R, n) / d + 2;
  HPReal B = z * at(aux.r, n) / d;
  return {std::move(A), std::move(B)};
}

HPReal check_lowering(const RecurrenceTable& table, const AuxSequence& aux, int n, const HPReal& z,
                      const LadderOptions& opt) {
  check_n(aux, n, 1, 0, "check_lowering");
  const auto [An, Bn] = An_Bn(aux, n, z, opt);
  const PolyJet j = eval_poly_jet(table, n, z);
  const HPReal rhs = -Bn * j.P + at(table.beta, n) * An * j.Pm1;
  const HPReal scale = max(abs(j.dP), HPReal(1L, j.dP.precision()));
  return abs(j.dP - rhs) / scale;
}

HPReal check_raising(const RecurrenceTable& table, const AuxSequence& aux, int n, const HPReal& z,
                     const LadderOptions& opt) {
  check_n(aux, n, 1, 0, "check_raising");
  const auto [An1, Bn1_unused] = An_Bn(aux, n - 1, z, opt);
  const auto [An, Bn] = An_Bn(aux, n, z, opt);
  const PolyJet j = eval_poly_jet(table, n, z);
  const HPReal lhs = j.dPm1 - ldexp(z, 1) * j.Pm1 - Bn * j.Pm1;
  const HPReal rhs = -An1 * j.P;
  const HPReal scale = max(abs(lhs), HPReal(1L, lhs.precision()));
  return abs(lhs - rhs) / scale;
}

SupplementaryResiduals check_supplementary(const AuxSequence& aux, const RecurrenceTable& table, int n,
                                           const HPReal& z, const LadderOptions& opt) {
  check_n(aux, n, 1, 1, "check_supplementary");
  const auto [Anm1, Bnm1] = An_Bn(aux, n - 1, z, opt);
  const auto [An, Bn] = An_Bn(aux, n, z, opt);
  const auto [Anp1, Bnp1] = An_Bn(aux, n + 1, z, opt);
  const HPReal two_z = ldexp(z, 1);

  HPReal s1 = relative_residual(Bn + Bnp1, z * An - two_z);

  HPReal s2 = relative_residual(1L + z * (Bnp1 - Bn), at(table.beta, n + 1) * Anp1 - at(table.beta, n) * Anm1);

  HPReal sumA(An.precision());
  for (int j = 0; j < n; ++j) sumA += An_Bn(aux, j, z, opt).first;
  HPReal s2p = relative_residual(sumA + square(Bn) + two_z * Bn, at(table.beta, n) * An * Anm1);
  return {std::move(s1), std::move(s2), std::move(s2p)};
}

DifferenceResiduals check_difference_relations(const AuxSequence& aux, const RecurrenceTable& table, int n) {
  check_n(aux, n, 1, 1, "check_difference_relations");
  const HPReal& a = aux.params.a();
  const HPReal& Rn = at(aux.R, n);
  const HPReal& Rm = at(aux.R, n - 1);
  const HPReal& rn = at(aux.r, n);
  const HPReal& bn = at(table.beta, n);

  HPReal d = relative_residual(rn + at(aux.r, n + 1), a * Rn);
  HPReal c = relative_residual(square(rn), bn * Rn * Rm);
  HPReal sumR(Rn.precision());
  for (int j = 0; j < n; ++j) sumR += at(aux.R, j);
  HPReal b = relative_residual(a * sumR + square(rn) + ldexp(square(a) * rn, 1), ldexp(a * bn * (Rn + Rm), 1));
  HPReal aa = relative_residual(ldexp(bn, 1), rn + n);
  return {std::move(d), std::move(c), std::move(b), std::move(aa)};
}

HPReal check_combined_difference(const AuxSequence& aux, int n) {
  check_n(aux, n, 1, 0, "check_combined_difference");
  const HPReal& rn = at(aux.r, n);
  return relative_residual(ldexp(square(rn), 1), (rn + n) * at(aux.R, n) * at(aux.R, n - 1));
}

HPReal p_from_aux(const AuxSequence& aux, const RecurrenceTable& table, int n) {
  (void)table;
  check_n(aux, n, 0, 0, "p_from_aux");
  const HPReal& Rn = at(aux.R, n);
  if (Rn.is_zero()) {
    throw AuxDegenerate("R_" + std::to_string(n) + " = 0 (B = 0 or P_n(a) = 0); p(n,a) formula is singular");
  }
  const HPReal& a = aux.params.a();
  const HPReal& rn = at(aux.r, n);
  const HPReal r2 = square(rn);
  HPReal p = -ldexp(a * (rn + n) * Rn, -2);
  p -= ldexp(a * r2 / Rn, -1);
  p += ldexp(r2, -2);
  p += ldexp(square(a) * rn, -1);
  p += ldexp(rn, -2);
  p -= ldexp(HPReal(static_cast<long>(n) * n - n, Rn.precision()), -2);
  return p;
}

HPReal check_ode_P(const RecurrenceTable& table, const AuxSequence& aux, int n, const HPReal& z,
                   const LadderOptions& opt) {
  check_n(aux, n, 1, 0, "check_ode_P");
  const HPReal& a = aux.params.a();
  const HPReal d = pole_distance(aux, z, opt);
  const HPReal d2 = square(d);
  const HPReal& Rn = at(aux.R, n);
  const HPReal& rn = at(aux.r, n);

  const HPReal pole_part = a * Rn / d;
  const HPReal An = pole_part + 2;
  const HPReal tol = ldexp(abs(pole_part) + 2, -(An.precision().bits / 2));
  if (abs(An) <= tol) {
    throw AnZero("A_" + std::to_string(n) + "(z) vanishes at z=" + z.to_string(20));
  }
  const HPReal Bn = z * rn / d;
  const HPReal Anm1 = a * at(aux.R, n - 1) / d + 2;
  // A_n' = -2 a R_n z / (z^2-a^2)^2,  B_n' = -r_n (z^2 + a^2) / (z^2-a^2)^2
  const HPReal dAn = -ldexp(a * Rn * z, 1) / d2;
  const HPReal dBn = -rn * (square(z) + square(a)) / d2;
  const HPReal two_z = ldexp(z, 1);

  const HPReal Q = -dAn / An - two_z;
  const HPReal S = dBn - dAn / An * Bn - two_z * Bn - square(Bn) + at(table.beta, n) * An * Anm1;

  const PolyJet j = eval_poly_jet(table, n, z);
  const HPReal t1 = j.d2P;
  const HPReal t2 = Q * j.dP;
  const HPReal t3 = S * j.P;
  HPReal scale = max(max(abs(t1), abs(t2)), abs(t3));
  if (scale < 1) scale = HPReal(1L, scale.precision());
  return abs(t1 + t2 + t3) / scale;
}

}  // namespace guegap
