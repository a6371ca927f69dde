#ifndef ULNML_DATA_HPP
#define ULNML_DATA_HPP

#include <cstdint>
#include <string>

#include "ulnml/core.hpp"

namespace ulnml {

struct RegressionMeta {
  int informative = 0;
  bool correlated = false;
  std::uint64_t seed = 0;
  bool standardized = false;
  double noise_sd = 1.0;
};

struct RegressionDataset {
  Matrix X;
  Vector y;
  RegressionMeta meta;
};

/// Synthetic regression data: informative features with unit coefficients
/// plus irrelevant ones, i.i.d. standard normal design (or, when
/// correlated, all columns mixed from a seeded 10-dimensional latent
/// design), Gaussian noise. Deterministic per seed.
RegressionDataset gen_synth_regression(int n, int informative, int irrelevant, bool correlated,
                                       double noise_sd, std::uint64_t seed);

/// In-place column standardization to mean 0, variance 1 (constant columns
/// are centered only). Returns per-column (mean, sd) used.
std::pair<Vector, Vector> standardize_columns(Matrix& X);

/// Comma-separated numeric file with a header row; the named target column
/// becomes y, all other columns become X. Errors carry the offending row
/// index. Optional per-column feature standardization.
RegressionDataset load_csv(const std::string& path, const std::string& target_column,
                           bool standardize);

/// splitmix64-style mixing of stream tags into RNG seeds.
std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b = 0x9e3779b97f4a7c15ull,
                       std::uint64_t c = 0xbf58476d1ce4e5b9ull);

}  // namespace ulnml

#endif  // ULNML_DATA_HPP
