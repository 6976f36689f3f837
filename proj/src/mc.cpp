#include "guegap/mc.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "guegap/ortho.hpp"
#include "guegap/parallel.hpp"
#include "guegap/special.hpp"

namespace guegap {

NormalizationC normalization(int n, Precision prec) {
  if (n < 1 || n > 16) throw std::invalid_argument("normalization: need 1 <= n <= 16");
  const HPReal two_pi = ldexp(pi(prec), 1);
  HPReal c = pow(sqrt(two_pi), static_cast<long>(n));
  c *= barnes_g(n + 1, prec);
  // 2^{-n^2/2}; n^2 is odd for odd n
  const long e = static_cast<long>(n) * n;
  c = ldexp(c, -(e / 2));
  if (e % 2 != 0) c /= sqrt(HPReal(2L, prec));
  return {n, std::move(c)};
}

std::string_view to_string(GapCase c) { return c == GapCase::Complement ? "complement" : "bulk"; }

GapCase parse_gap_case(std::string_view s) {
  if (s == "complement") return GapCase::Complement;
  if (s == "bulk") return GapCase::Bulk;
  throw std::invalid_argument("unknown gap case '" + std::string(s) + "' (expected complement or bulk)");
}

WeightParams gap_weight(GapCase c, const HPReal& a) {
  const Precision p = a.precision();
  return c == GapCase::Complement ? WeightParams(HPReal(0L, p), HPReal(1L, p), a, p)
                                  : WeightParams(HPReal(1L, p), HPReal(-1L, p), a, p);
}

HPReal gap_probability(int n, const HPReal& a, GapCase c) {
  const Precision p = a.precision();
  const RecurrenceTable table = solve_recurrence(gap_weight(c, a), n);
  return exp(hankel_logdet(table, n).at(p)) / normalization(n, p).C;
}

std::vector<double> sample_spectrum(int n, std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("sample_spectrum: n >= 1");
  std::normal_distribution<double> diag(0.0, std::sqrt(0.5));
  std::normal_distribution<double> off(0.0, 0.5);
  Eigen::MatrixXcd X(n, n);
  for (int i = 0; i < n; ++i) {
    X(i, i) = diag(rng);
    for (int j = i + 1; j < n; ++j) {
      const double re = off(rng);
      const double im = off(rng);
      X(i, j) = {re, im};
      X(j, i) = {re, -im};
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(X, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

GapEstimate gap_estimate(int n, double a, GapCase c, std::int64_t trials, std::uint64_t seed, unsigned workers) {
  if (n < 1) throw std::invalid_argument("gap_estimate: n >= 1");
  if (!(a > 0)) throw std::invalid_argument("gap_estimate: a > 0");
  if (trials < 1) throw std::invalid_argument("gap_estimate: trials >= 1");
  const auto chunks = static_cast<std::size_t>((trials + kMcChunk - 1) / kMcChunk);
  std::vector<std::int64_t> hits(chunks, 0);
  parallel_for(chunks, workers, [&](std::size_t k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::mt19937_64 rng(seq);
    const std::int64_t begin = static_cast<std::int64_t>(k) * kMcChunk;
    const std::int64_t end = std::min<std::int64_t>(trials, begin + kMcChunk);
    std::int64_t count = 0;
    for (std::int64_t t = begin; t < end; ++t) {
      const auto ev = sample_spectrum(n, rng);
      bool ok = true;
      for (double x : ev) {
        const bool inside = std::abs(x) < a;
        if (inside == (c == GapCase::Complement)) {
          ok = false;
          break;
        }
      }
      count += ok ? 1 : 0;
    }
    hits[k] = count;
  });
  GapEstimate out;
  out.n = n;
  out.a = a;
  out.gap_case = c;
  out.trials = trials;
  for (auto h : hits) out.hits += h;
  out.p_hat = static_cast<double>(out.hits) / static_cast<double>(trials);
  out.std_err = std::sqrt(out.p_hat * (1.0 - out.p_hat) / static_cast<double>(trials));
  out.seed = seed;
  out.chunk_size = kMcChunk;
  return out;
}

}  // namespace guegap
