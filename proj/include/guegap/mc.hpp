#ifndef GUEGAP_MC_HPP
#define GUEGAP_MC_HPP

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "guegap/hpreal.hpp"
#include "guegap/moments.hpp"

namespace guegap {

/// C_n = (2 pi)^{n/2} 2^{-n^2/2} G(n+1), the n-fold integral of
/// prod (x_i - x_j)^2 e^{-sum x^2} over R^n divided by n!. 1 <= n <= 16.
struct NormalizationC {
  int n = 0;
  HPReal C;
};
NormalizationC normalization(int n, Precision prec);

enum class GapCase {
  Complement,  // no eigenvalue in (-a, a); weight A = 0, B = 1
  Bulk,        // every eigenvalue in (-a, a); weight A = 1, B = -1
};
std::string_view to_string(GapCase c);
/// Accepts "complement" or "bulk"; throws std::invalid_argument otherwise.
GapCase parse_gap_case(std::string_view s);
WeightParams gap_weight(GapCase c, const HPReal& a);

/// D_n(a) / C_n for the weight of the given case.
HPReal gap_probability(int n, const HPReal& a, GapCase c);

/// Eigenvalues (ascending) of a Hermitian matrix with density ∝ e^{-tr X^2}:
/// X_ii ~ N(0, 1/2), Re X_ij and Im X_ij ~ N(0, 1/4) for i < j.
std::vector<double> sample_spectrum(int n, std::mt19937_64& rng);

struct GapEstimate {
  int n = 0;
  double a = 0.0;
  GapCase gap_case = GapCase::Complement;
  std::int64_t trials = 0;
  std::int64_t hits = 0;
  double p_hat = 0.0;
  double std_err = 0.0;
  std::uint64_t seed = 0;
  std::int64_t chunk_size = 0;
};

/// Trials are split into fixed-size chunks; chunk k draws from an mt19937_64
/// seeded with seed_seq{seed_lo, seed_hi, k}. The result depends only on
/// (n, a, case, trials, seed), not on the worker count.
/// Requires n >= 1, a > 0, trials >= 1.
GapEstimate gap_estimate(int n, double a, GapCase c, std::int64_t trials, std::uint64_t seed, unsigned workers = 0);

constexpr std::int64_t kMcChunk = 1 << 14;

}  // namespace guegap

#endif  // GUEGAP_MC_HPP
