#include "ulnml/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace ulnml {

std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull + (b << 1) + (c << 3);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

RegressionDataset gen_synth_regression(int n, int informative, int irrelevant, bool correlated,
                                       double noise_sd, std::uint64_t seed) {
  detail::require(n >= 2, "need at least two samples");
  detail::require(informative >= 0 && irrelevant >= 0 && informative + irrelevant >= 1,
                  "need at least one feature");
  detail::require(noise_sd >= 0.0, "noise sd must be nonnegative");
  const int p = informative + irrelevant;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix X(n, p);
  if (correlated) {
    // All columns live in a 10-dimensional latent subspace.
    const int latent = 10;
    Matrix A(latent, p);
    for (int i = 0; i < latent; ++i)
      for (int j = 0; j < p; ++j) A(i, j) = normal(rng);
    Matrix Z(n, latent);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < latent; ++j) Z(i, j) = normal(rng);
    X = Z * A;
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) X(i, j) = normal(rng);
  }

  Vector beta = Vector::Zero(p);
  beta.head(informative).setOnes();
  Vector y = X * beta;
  for (int i = 0; i < n; ++i) y[i] += noise_sd * normal(rng);

  RegressionDataset ds;
  ds.X = std::move(X);
  ds.y = std::move(y);
  ds.meta = RegressionMeta{informative, correlated, seed, false, noise_sd};
  return ds;
}

std::pair<Vector, Vector> standardize_columns(Matrix& X) {
  const Eigen::Index n = X.rows(), p = X.cols();
  detail::require(n >= 1, "cannot standardize an empty matrix");
  Vector means(p), sds(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double mean = X.col(j).mean();
    X.col(j).array() -= mean;
    double var = X.col(j).squaredNorm() / static_cast<double>(n);
    double sd = std::sqrt(var);
    if (sd > 1e-300) {
      X.col(j) /= sd;
    } else {
      sd = 1.0;  // constant column: centered only
    }
    means[j] = mean;
    sds[j] = sd;
  }
  return {means, sds};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, std::size_t row) {
  const std::string t = trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    std::ostringstream oss;
    oss << "ulnml: non-numeric cell '" << cell << "' in data row " << row;
    throw std::runtime_error(oss.str());
  }
  return value;
}

}  // namespace

RegressionDataset load_csv(const std::string& path, const std::string& target_column,
                           bool standardize) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ulnml: cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("ulnml: empty file: " + path);
  const auto header = split_csv_line(line);

  int target_idx = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == target_column) {
      target_idx = static_cast<int>(i);
      break;
    }
  }
  if (target_idx < 0) {
    throw std::runtime_error("ulnml: target column '" + target_column + "' not found in " + path);
  }

  std::vector<std::vector<double>> rows;
  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      std::ostringstream oss;
      oss << "ulnml: row " << row_number << " has " << cells.size() << " cells, expected "
          << header.size();
      throw std::runtime_error(oss.str());
    }
    std::vector<double> parsed(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) parsed[i] = parse_number(cells[i], row_number);
    rows.push_back(std::move(parsed));
  }
  if (rows.empty()) throw std::runtime_error("ulnml: no data rows in " + path);

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = static_cast<Eigen::Index>(header.size()) - 1;
  detail::require(p >= 1, "csv must contain at least one feature column");

  RegressionDataset ds;
  ds.X.resize(n, p);
  ds.y.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    Eigen::Index c = 0;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (static_cast<int>(i) == target_idx) {
        ds.y[r] = rows[r][i];
      } else {
        ds.X(r, c++) = rows[r][i];
      }
    }
  }
  if (standardize) {
    standardize_columns(ds.X);
    ds.meta.standardized = true;
  }
  return ds;
}

}  // namespace ulnml
