#include "guegap/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "guegap/errors.hpp"
#include "guegap/ladder.hpp"
#include "guegap/mc.hpp"
#include "guegap/moments.hpp"
#include "guegap/ortho.hpp"
#include "guegap/painleve.hpp"
#include "guegap/scaling.hpp"

namespace guegap {

namespace {

using Json = nlohmann::ordered_json;
using Prov = std::vector<std::pair<std::string, std::string>>;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr long kDefaultPrec = 256;
constexpr long kMaxPrec = 1L << 20;
const char* const kZSample[] = {"-2.3", "-0.21", "0.13", "0.97", "1.8"};

struct Common {
  std::string A = "0";
  std::string B = "1";
  std::string a;
  long prec = 0;
  std::string format;
  std::string out_path;
  bool no_timestamp = false;
  unsigned workers = 0;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

long resolve_prec(long flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("GUEGAP_PREC"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 16 || v > kMaxPrec) {
      throw UsageError("GUEGAP_PREC must be an integer in [16, " + std::to_string(kMaxPrec) + "]");
    }
    return v;
  }
  return kDefaultPrec;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
  return os.str();
}

Prov base_prov(const std::string& command, const Common& c, long prec) {
  return {{"tool", "guegap"}, {"version", kVersion}, {"command", command},
          {"A", c.A},         {"B", c.B},           {"prec_bits", std::to_string(prec)}};
}

void finish_prov(Prov& prov, const Common& c) {
  if (!c.no_timestamp) prov.emplace_back("timestamp", utc_timestamp());
}

Json prov_json(const Prov& prov) {
  Json j = Json::object();
  for (const auto& [k, v] : prov) j[k] = v;
  return j;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void emit_table(std::ostream& os, const std::string& format, const Prov& prov, const Table& t) {
  if (format == "json") {
    Json j;
    j["provenance"] = prov_json(prov);
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    os << j.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : prov) os << "# " << k << '=' << v << '\n';
  os << join(t.columns) << '\n';
  for (const auto& r : t.rows) os << join(r) << '\n';
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    if (cur.empty()) throw UsageError("empty entry in list '" + s + "'");
    out.push_back(cur);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::string require_a(const Common& c, const char* cmd) {
  if (c.a.empty()) throw UsageError(std::string(cmd) + ": --a is required");
  return c.a;
}

EscalationPolicy policy_for(bool escalate, long prec) {
  EscalationPolicy p;
  if (!escalate) p.cap_bits = prec;
  return p;
}

// ---- moments / recurrence ----

int cmd_moments(const Common& c, int order, std::ostream& out) {
  const long prec = resolve_prec(c.prec);
  const auto params = WeightParams::parse(c.A, c.B, require_a(c, "moments"), Precision{prec});
  const MomentTable mt = build_table(params, order);
  Table t{{"m", "mu_2m"}, {}};
  for (int m = 0; m <= order; ++m) t.rows.push_back({std::to_string(m), mt.mu_even[static_cast<std::size_t>(m)].to_string()});
  Prov prov = base_prov("moments", c, prec);
  prov.emplace_back("a", c.a);
  prov.emplace_back("order", std::to_string(order));
  finish_prov(prov, c);
  emit_table(out, c.format.empty() ? "csv" : c.format, prov, t);
  return kExitOk;
}

int cmd_recurrence(const Common& c, int n_max, bool escalate, std::ostream& out) {
  const long prec = resolve_prec(c.prec);
  const auto params = WeightParams::parse(c.A, c.B, require_a(c, "recurrence"), Precision{prec});
  const RecurrenceTable table = solve_recurrence(params, n_max, policy_for(escalate, prec));
  const AuxSequence aux = build_aux(table);
  Table t{{"n", "h_n", "beta_n", "log_D_n", "p_n", "R_n", "r_n", "h_rel_error"}, {}};
  for (int n = 0; n <= n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    t.rows.push_back({std::to_string(n), table.h[i].to_string(), table.beta[i].to_string(), table.logD[i].to_string(),
                      table.p_coeff[i].to_string(), aux.R[i].to_string(), aux.r[i].to_string(),
                      fmt_double(table.h_rel_error[i])});
  }
  Prov prov = base_prov("recurrence", c, table.prec().bits);
  prov.emplace_back("a", c.a);
  prov.emplace_back("requested_prec_bits", std::to_string(prec));
  prov.emplace_back("n_max", std::to_string(n_max));
  finish_prov(prov, c);
  emit_table(out, c.format.empty() ? "csv" : c.format, prov, t);
  return kExitOk;
}

// ---- verify ----

struct Check {
  std::string name;
  std::string kind;
  HPReal threshold;
  HPReal worst;
  bool has = false;
  int worst_n = -1;
  long samples = 0;
  long skipped = 0;
  std::string note;

  void add(const HPReal& v, int n) {
    ++samples;
    if (!has || !v.is_finite() || v > worst) {
      worst = v;
      worst_n = n;
    }
    has = true;
  }
  void add(const ResidualSeries& s, int n) {
    for (const auto& v : s.values) add(v, n);
  }
  [[nodiscard]] bool evaluated() const { return samples > 0; }
  [[nodiscard]] bool pass() const { return evaluated() && worst < threshold; }
};

struct VerifyConfig {
  int n_max = 30;
  std::string threshold;
  std::string beta_threshold;
  std::string fd_threshold = "1e-6";
  std::string fd_h = "1e-4";
  bool escalate = false;
};

HPReal default_threshold(long prec, double digits_per_bit) {
  const long d = std::max<long>(1, static_cast<long>(std::floor(digits_per_bit * static_cast<double>(prec))));
  return 1L / pow(HPReal(10L, Precision{prec}), d);
}

int cmd_verify(const Common& c, const VerifyConfig& v, std::ostream& out) {
  const long prec = resolve_prec(c.prec);
  const Precision P{prec};
  const auto params = WeightParams::parse(c.A, c.B, require_a(c, "verify"), P);
  if (v.n_max < 1) throw UsageError("verify: --n-max must be >= 1");
  const HPReal exact_tol = v.threshold.empty() ? default_threshold(prec, 0.08) : HPReal::parse(v.threshold, P);
  const HPReal beta_tol = v.beta_threshold.empty() ? default_threshold(prec, 0.05) : HPReal::parse(v.beta_threshold, P);
  const HPReal fd_tol = HPReal::parse(v.fd_threshold, P);
  const HPReal h = HPReal::parse(v.fd_h, P);
  if (!(h > 0)) throw UsageError("verify: --fd-h must be positive");

  std::deque<Check> checks;  // stable references
  auto make = [&](const std::string& name, const std::string& kind, const HPReal& tol) -> Check& {
    checks.push_back(Check{name, kind, tol, HPReal(P), false, -1, 0, 0, {}});
    return checks.back();
  };

  Prov prov = base_prov("verify", c, prec);
  prov.emplace_back("a", c.a);
  prov.emplace_back("n_max", std::to_string(v.n_max));
  prov.emplace_back("z_sample", join(std::vector<std::string>(std::begin(kZSample), std::end(kZSample))));
  prov.emplace_back("fd_h", v.fd_h);
  prov.emplace_back("escalate", v.escalate ? "true" : "false");

  Json error = nullptr;
  long used_bits = prec;
  try {
    const RecurrenceTable table = solve_recurrence(params, v.n_max + 1, policy_for(v.escalate, prec));
    used_bits = table.prec().bits;
    const AuxSequence aux = build_aux(table);
    std::vector<HPReal> zs;
    for (const char* z : kZSample) zs.push_back(HPReal::parse(z, table.prec()));

    Check& lo = make("lowering_operator", "exact", exact_tol);
    Check& ro = make("raising_operator", "exact", exact_tol);
    Check& s1 = make("compat_S1", "exact", exact_tol);
    Check& s2 = make("compat_S2", "exact", exact_tol);
    Check& s2p = make("compat_S2_sum", "exact", exact_tol);
    Check& ode = make("ode_P_n", "exact", exact_tol);
    for (int n = 1; n <= v.n_max; ++n) {
      for (const auto& z : zs) {
        try {
          lo.add(check_lowering(table, aux, n, z), n);
          ro.add(check_raising(table, aux, n, z), n);
          const auto sp = check_supplementary(aux, table, n, z);
          s1.add(sp.s1, n);
          s2.add(sp.s2, n);
          s2p.add(sp.s2p, n);
        } catch (const PoleAtJump&) {
          ++lo.skipped;
          ++ro.skipped;
          ++s1.skipped;
          ++s2.skipped;
          ++s2p.skipped;
        }
        try {
          ode.add(check_ode_P(table, aux, n, z), n);
        } catch (const AnZero&) {
          ++ode.skipped;
        } catch (const PoleAtJump&) {
          ++ode.skipped;
        }
      }
    }

    Check& dd = make("difference_d", "exact", exact_tol);
    Check& dc = make("difference_c", "exact", exact_tol);
    Check& db = make("difference_b", "exact", exact_tol);
    Check& da = make("difference_a", "exact", exact_tol);
    Check& comb = make("difference_combined", "exact", exact_tol);
    Check& pa = make("p_from_aux", "exact", exact_tol);
    for (int n = 1; n <= v.n_max; ++n) {
      const auto d = check_difference_relations(aux, table, n);
      dd.add(d.d, n);
      dc.add(d.c, n);
      db.add(d.b, n);
      da.add(d.a, n);
      comb.add(check_combined_difference(aux, n), n);
      if (n >= 2) {
        try {
          pa.add(relative_residual(p_from_aux(aux, table, n), table.p_coeff[static_cast<std::size_t>(n)]), n);
        } catch (const AuxDegenerate&) {
          ++pa.skipped;
          pa.note = "R_n vanishes (B = 0)";
        }
      }
    }

    Check& it = make("beta_iteration", "cross-route", beta_tol);
    try {
      const auto beta = iterate_beta(table.params, v.n_max);
      for (int n = 1; n <= v.n_max; ++n) {
        const auto i = static_cast<std::size_t>(n);
        it.add(relative_residual(beta[i], table.beta[i]), n);
      }
    } catch (const DivisionBreakdown& e) {
      it.note = e.what();
      it.add(HPReal(1L, P), e.n());
    }

    Check& lnh = make("d_ln_h", "finite-difference", fd_tol);
    Check& dp = make("d_p", "finite-difference", fd_tol);
    Check& ric_r = make("riccati_r", "finite-difference", fd_tol);
    Check& ric_R = make("riccati_R", "finite-difference", fd_tol);
    Check& r_R = make("r_from_R", "finite-difference", fd_tol);
    Check& ode_R = make("ode_R", "finite-difference", fd_tol);
    Check& ode_r = make("ode_r", "finite-difference", fd_tol);
    Check& ode_b = make("ode_beta", "finite-difference", fd_tol);
    Check& sig_ode = make("sigma_ode", "finite-difference", fd_tol);
    Check& sig_rt = make("sigma_routes", "exact", exact_tol);
    Check& sig_r = make("sigma_r_identity", "exact", exact_tol);
    std::optional<AGrid> grid;
    try {
      grid = AGrid::centered(table.params.a(), h.at(table.prec()), 2);
    } catch (const std::invalid_argument&) {
      for (Check* ch : {&lnh, &dp, &ric_r, &ric_R, &r_R, &ode_R, &ode_r, &ode_b, &sig_ode, &sig_rt, &sig_r}) {
        ch->note = "a too close to 0 for the finite-difference stencil";
      }
    }
    if (grid) {
      const GridData data = build_grid_data(table.params, v.n_max + 1, *grid, policy_for(v.escalate, table.prec().bits),
                                            c.workers);
      for (int n = 1; n <= v.n_max; ++n) {
        const auto rel = diff_relations_in_a(data, n);
        lnh.add(rel.lnh, n);
        dp.add(rel.p, n);
        try {
          const auto rr = riccati_residuals(data, n);
          ric_r.add(rr.r, n);
          ric_R.add(rr.R, n);
          r_R.add(r_from_R_consistency(data, n), n);
          const auto so = second_order_residuals(data, n);
          ode_R.add(so.R_ode, n);
          ode_r.add(so.r_ode, n);
        } catch (const AuxDegenerate&) {
          for (Check* ch : {&ric_r, &ric_R, &r_R, &ode_R, &ode_r}) {
            ++ch->skipped;
            ch->note = "R_n vanishes (B = 0)";
          }
        }
        ode_b.add(beta_ode_residuals(data, n), n);
        const auto ss = sigma_series(data, n);
        sig_ode.add(sigma_ode_residual(ss), n);
        sig_rt.add(sigma_route_agreement(ss), n);
        sig_r.add(sigma_r_identity(ss), n);
      }
    }
  } catch (const PrecisionExhausted& e) {
    error = Json{{"type", "PrecisionExhausted"},
                 {"n", e.n()},
                 {"prec_bits", e.prec_bits()},
                 {"significant_bits", e.significant_bits()},
                 {"message", e.what()}};
  }

  bool all_pass = true;
  Json arr = Json::array();
  Table t{{"name", "kind", "max_residual", "threshold", "status", "samples", "skipped", "worst_n"}, {}};
  for (const auto& ch : checks) {
    const std::string status = ch.evaluated() ? (ch.pass() ? "pass" : "fail") : "skipped";
    if (status == "fail") all_pass = false;
    Json j{{"name", ch.name},
           {"kind", ch.kind},
           {"max_residual", ch.evaluated() ? Json(ch.worst.to_string(6)) : Json(nullptr)},
           {"threshold", ch.threshold.to_string(6)},
           {"status", status},
           {"samples", ch.samples},
           {"skipped", ch.skipped},
           {"worst_n", ch.worst_n}};
    if (!ch.note.empty()) j["note"] = ch.note;
    arr.push_back(std::move(j));
    t.rows.push_back({ch.name, ch.kind, ch.evaluated() ? ch.worst.to_string(6) : "NA", ch.threshold.to_string(6), status,
                      std::to_string(ch.samples), std::to_string(ch.skipped), std::to_string(ch.worst_n)});
  }
  const std::string overall = !error.is_null() ? "precision_exhausted" : (all_pass ? "pass" : "fail");
  prov.emplace_back("used_prec_bits", std::to_string(used_bits));
  prov.emplace_back("status", overall);
  finish_prov(prov, c);

  if (c.format == "csv") {
    emit_table(out, "csv", prov, t);
  } else {
    Json report;
    report["provenance"] = prov_json(prov);
    report["status"] = overall;
    report["checks"] = std::move(arr);
    report["error"] = error;
    out << report.dump(2) << '\n';
  }
  if (!error.is_null()) return kExitPrecision;
  return all_pass ? kExitOk : kExitThreshold;
}

// ---- sigma ----

int cmd_sigma(const Common& c, int n, const std::string& grid_spec, bool escalate, const std::string& threshold,
              std::ostream& out) {
  const long prec = resolve_prec(c.prec);
  const Precision P{prec};
  const AGrid grid = AGrid::parse(grid_spec, P);
  const std::string a_tmpl = c.a.empty() ? grid.a_min.to_string() : c.a;
  const auto params = WeightParams::parse(c.A, c.B, a_tmpl, P);
  const GridData data = build_grid_data(params, n, grid, policy_for(escalate, prec), c.workers);
  const SigmaSeries s = sigma_series(data, n);
  const ResidualSeries res = sigma_ode_residual(s);
  Table t{{"a", "sigma", "sigma_prime", "sigma_double_prime", "residual", "sigma_route2", "r_n", "sigma_prime_route"}, {}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    t.rows.push_back({s.a_grid[i].to_string(), s.sigma[i].to_string(), s.sigma1[i].to_string(), s.sigma2[i].to_string(),
                      res.values[i].to_string(6), s.sigma_route2[i].to_string(), s.r[i].to_string(),
                      s.sigma1_route[i] == DerivRoute::ClosedForm ? "closed-form" : "finite-difference"});
  }
  long used = prec;
  for (const auto& p : data.points) used = std::max(used, p.table.prec().bits);
  Prov prov = base_prov("sigma", c, used);
  prov.emplace_back("n", std::to_string(n));
  prov.emplace_back("grid", grid_spec);
  prov.emplace_back("trimmed_points_per_side", "2");
  if (s.size() > 0) prov.emplace_back("max_residual", res.max().to_string(6));
  finish_prov(prov, c);
  emit_table(out, c.format.empty() ? "csv" : c.format, prov, t);
  if (!threshold.empty() && s.size() > 0 && !(res.max() < HPReal::parse(threshold, P))) return kExitThreshold;
  return kExitOk;
}

// ---- scale ----

struct ScaleConfig {
  std::string taus = "0.5,1,2";
  std::string n_list = "16,32,64,128,256";
  double h_tau = 1e-3;
  long base_bits = 256;
  long bits_per_n = 3;
  bool raw = false;
};

int cmd_scale(const Common& c, const ScaleConfig& sc, std::ostream& out) {
  std::vector<int> ns;
  for (const auto& s : split(sc.n_list, ',')) {
    try {
      std::size_t pos = 0;
      ns.push_back(std::stoi(s, &pos));
      if (pos != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw UsageError("scale: bad --n-list entry '" + s + "'");
    }
  }
  ScalingOptions opt;
  opt.h_tau = sc.h_tau;
  opt.base_bits = sc.base_bits;
  opt.bits_per_n = sc.bits_per_n;
  opt.workers = c.workers;
  const long prec = std::max(resolve_prec(c.prec), scaling_precision(ns.back(), opt).bits);
  const Precision P{prec};
  std::vector<HPReal> taus;
  for (const auto& s : split(sc.taus, ',')) taus.push_back(HPReal::parse(s, P));
  const auto params = WeightParams::parse(c.A, c.B, c.a.empty() ? "1" : c.a, P);
  const ScalingProfile prof = build_profile(params, taus, ns, opt);

  Table t;
  if (sc.raw) {
    t.columns = {"n", "tau", "prec_bits", "sigma", "r", "sqrt_n_R", "dsigma", "d2sigma", "pv_residual"};
    for (std::size_t i = 0; i < ns.size(); ++i) {
      for (std::size_t j = 0; j < taus.size(); ++j) {
        const TauSample& s = prof.samples[i][j];
        t.rows.push_back({std::to_string(ns[i]), taus[j].to_string(), std::to_string(s.prec_bits), s.sigma.to_string(),
                          s.r.to_string(), s.Rs.to_string(), s.has_derivatives ? s.dsigma.to_string() : "NA",
                          s.has_derivatives ? s.d2sigma.to_string() : "NA",
                          s.has_derivatives ? pv_residual_raw(prof, i, j).to_string(6) : "NA"});
      }
    }
  } else {
    t.columns = {"tau",      "n_max",       "levels",  "prec_bits", "sigma",       "sigma_error",    "sigma_order",
                 "r",        "r_error",     "R",       "R_error",     "pv_residual",    "ode_R_residual",
                 "ode_r_residual", "branch_residual", "r_sign"};
    for (std::size_t j = 0; j < taus.size(); ++j) {
      for (std::size_t i = 0; i < ns.size(); ++i) {
        const TauLimit lim = prof.limit(j, ns[i]);
        std::string pv = "NA", oR = "NA", orr = "NA", br = "NA", sg = "NA";
        if (lim.has_derivatives) {
          pv = pv_residual(prof, j, ns[i]).to_string(6);
          try {
            const auto [x, y] = limit_ode_residuals(prof, j, ns[i]);
            oR = x.to_string(6);
            orr = y.to_string(6);
          } catch (const PoleInODE&) {
          }
          const auto b = limit_branch(prof, j, ns[i]);
          br = b.residual.to_string(6);
          sg = std::to_string(b.r_sign);
        }
        t.rows.push_back({taus[j].to_string(), std::to_string(ns[i]), std::to_string(std::min<std::size_t>(3, i + 1)),
                          std::to_string(lim.sigma.value.precision().bits), lim.sigma.value.to_string(), lim.sigma.error.to_string(6), fmt_double(lim.sigma.order),
                          lim.r.value.to_string(), lim.r.error.to_string(6), lim.Rs.value.to_string(),
                          lim.Rs.error.to_string(6), pv, oR, orr, br, sg});
      }
    }
  }
  Prov prov = base_prov("scale", c, prec);
  prov.emplace_back("tau", sc.taus);
  prov.emplace_back("n_list", join(ns));
  prov.emplace_back("h_tau", fmt_double(sc.h_tau));
  prov.emplace_back("level_prec_bits", std::to_string(sc.base_bits) + "+" + std::to_string(sc.bits_per_n) + "*n");
  prov.emplace_back("extrapolation", "quadratic in 1/n through the three finest levels");
  finish_prov(prov, c);
  emit_table(out, c.format.empty() ? "csv" : c.format, prov, t);
  return kExitOk;
}

// ---- mc ----

struct McConfig {
  int n = 4;
  std::string a = "0.8";
  std::string gap_case = "complement";
  std::int64_t trials = 1000000;
  std::uint64_t seed = 1;
  std::optional<double> max_z;
};

int cmd_mc(const Common& c, const McConfig& m, std::ostream& out) {
  const long prec = resolve_prec(c.prec);
  const Precision P{prec};
  if (m.n < 1 || m.n > 16) throw UsageError("mc: --n must be in [1, 16]");
  if (m.trials < 10000) throw UsageError("mc: --trials must be >= 10000");
  const GapCase gc = parse_gap_case(m.gap_case);
  const HPReal a = HPReal::parse(m.a, P);
  if (!(a > 0)) throw UsageError("mc: --a must be > 0");
  const HPReal det = gap_probability(m.n, a, gc);
  const GapEstimate e = gap_estimate(m.n, a.to_double(), gc, m.trials, m.seed, c.workers);
  const double z = (e.p_hat - det.to_double()) / e.std_err;
  Table t{{"n", "a", "case", "trials", "hits", "p_hat", "std_err", "determinant", "z_score"},
          {{std::to_string(e.n), m.a, std::string(to_string(gc)), std::to_string(e.trials), std::to_string(e.hits),
            fmt_double(e.p_hat), fmt_double(e.std_err), det.to_string(), fmt_double(z)}}};
  Prov prov{{"tool", "guegap"}, {"version", kVersion}, {"command", "mc"}, {"prec_bits", std::to_string(prec)}};
  prov.emplace_back("seed", std::to_string(m.seed));
  prov.emplace_back("rng", "mt19937_64 per chunk, seed_seq(seed_lo, seed_hi, chunk_lo, chunk_hi)");
  prov.emplace_back("chunk_size", std::to_string(e.chunk_size));
  finish_prov(prov, c);
  emit_table(out, c.format.empty() ? "csv" : c.format, prov, t);
  if (m.max_z && !(std::abs(z) <= *m.max_z)) return kExitThreshold;
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c, bool weight) {
  if (weight) {
    sub->add_option("--A", c.A, "weight value inside (-a, a)")->capture_default_str();
    sub->add_option("--B", c.B, "jump of the weight outside (-a, a)")->capture_default_str();
    sub->add_option("--a", c.a, "jump location a >= 0 (decimal)");
  }
  sub->add_option("--prec", c.prec, "working precision in bits (default: $GUEGAP_PREC or 256)")
      ->check(CLI::Range(16L, kMaxPrec));
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out_path, "output file (default: stdout)");
  sub->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp from the provenance header");
  sub->add_option("--workers", c.workers, "worker threads (0 = hardware concurrency)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hankel determinants, recurrence data and gap probabilities for e^{-x^2}(A + B theta(x^2 - a^2))",
               "guegap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common c;
  int order = 10;
  int n_max = 20;
  bool escalate = false;
  bool no_escalate = false;
  VerifyConfig vc;
  int sigma_n = 8;
  std::string grid_spec;
  std::string sigma_threshold;
  ScaleConfig sc;
  McConfig mc;

  auto* moments = app.add_subcommand("moments", "even moments mu_2m for m = 0..order");
  add_common(moments, c, true);
  moments->add_option("--order", order, "largest m")->check(CLI::Range(0, 100000))->capture_default_str();

  auto* rec = app.add_subcommand("recurrence", "h_n, beta_n, ln D_n, p(n,a), R_n, r_n for n = 0..n_max");
  add_common(rec, c, true);
  rec->add_option("--n-max", n_max)->check(CLI::Range(1, 100000))->capture_default_str();
  rec->add_flag("--escalate", escalate, "raise the precision automatically when pivots lose their bits");

  auto* verify = app.add_subcommand("verify", "residual report for the ladder, difference and differential identities");
  add_common(verify, c, true);
  verify->add_option("--n-max", vc.n_max)->check(CLI::Range(1, 100000))->capture_default_str();
  verify->add_option("--threshold", vc.threshold, "bound for exact identities (default 10^-floor(0.08 prec))");
  verify->add_option("--beta-threshold", vc.beta_threshold,
                     "bound for the iterated beta_n (default 10^-floor(0.05 prec))");
  verify->add_option("--fd-threshold", vc.fd_threshold, "bound for finite-difference identities")->capture_default_str();
  verify->add_option("--fd-h", vc.fd_h, "finite-difference step in a")->capture_default_str();
  verify->add_flag("--escalate", vc.escalate, "raise the precision automatically when pivots lose their bits");

  auto* sigma = app.add_subcommand("sigma", "sigma_n(a) and its derivatives on a grid, with the sigma-ODE residual");
  add_common(sigma, c, true);
  sigma->add_option("--n", sigma_n)->check(CLI::Range(1, 100000))->capture_default_str();
  sigma->add_option("--grid", grid_spec, "a_min:a_max:h")->required();
  sigma->add_option("--threshold", sigma_threshold, "exit 4 when the largest residual is not below this");
  sigma->add_flag("--no-escalate", no_escalate, "fail instead of raising the precision");

  auto* scale = app.add_subcommand("scale", "double-scaling profile in tau = 2 sqrt(2n) a");
  add_common(scale, c, true);
  scale->add_option("--tau", sc.taus, "comma-separated tau values >= 0")->capture_default_str();
  scale->add_option("--n-list", sc.n_list, "comma-separated increasing n")->capture_default_str();
  scale->add_option("--h-tau", sc.h_tau, "tau step of the derivative stencil")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scale->add_option("--base-bits", sc.base_bits)->check(CLI::Range(16L, kMaxPrec))->capture_default_str();
  scale->add_option("--bits-per-n", sc.bits_per_n)->check(CLI::Range(0L, 1000L))->capture_default_str();
  scale->add_flag("--raw", sc.raw, "emit per-(n, tau) samples instead of limits");

  auto* mcs = app.add_subcommand("mc", "Monte Carlo gap probability against D_n(a)/C_n");
  add_common(mcs, c, false);
  mcs->add_option("--n", mc.n)->capture_default_str();
  mcs->add_option("--a", mc.a)->capture_default_str();
  mcs->add_option("--case", mc.gap_case, "complement or bulk")
      ->check(CLI::IsMember({"complement", "bulk"}))
      ->capture_default_str();
  mcs->add_option("--trials", mc.trials)->capture_default_str();
  mcs->add_option("--seed", mc.seed)->capture_default_str();
  mcs->add_option("--max-z", mc.max_z, "exit 4 when |z| exceeds this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Sink sink(c.out_path, out);
    std::ostream& os = sink.get();
    if (*moments) return cmd_moments(c, order, os);
    if (*rec) return cmd_recurrence(c, n_max, escalate, os);
    if (*verify) return cmd_verify(c, vc, os);
    if (*sigma) return cmd_sigma(c, sigma_n, grid_spec, !no_escalate, sigma_threshold, os);
    if (*scale) return cmd_scale(c, sc, os);
    if (*mcs) return cmd_mc(c, mc, os);
    err << "error: no subcommand\n";
    return kExitUsage;
  } catch (const PrecisionExhausted& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidWeight& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace guegap
