#pragma once

// Reference implementations used only by tests. Each one is deliberately
// computed along a different path from the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

/// Carry-less shift-and-add multiply reduced modulo 0x11B.
inline std::uint8_t gf_mul_schoolbook(std::uint8_t a, std::uint8_t b) {
  unsigned product = 0;
  for (int bit = 0; bit < 8; ++bit)
    if (b & (1u << bit)) product ^= static_cast<unsigned>(a) << bit;
  for (int bit = 15; bit >= 8; --bit)
    if (product & (1u << bit)) product ^= 0x11Bu << (bit - 8);
  return static_cast<std::uint8_t>(product);
}

/// Exhaustive search for the multiplicative inverse; 0 has none and maps to 0.
inline std::uint8_t gf_inv_bruteforce(std::uint8_t a) {
  for (unsigned x = 1; x < 256; ++x)
    if (gf_mul_schoolbook(a, static_cast<std::uint8_t>(x)) == 1) return static_cast<std::uint8_t>(x);
  return 0;
}

/// Nonsingularity by Gaussian elimination on the schoolbook field ops.
inline bool gf_nonsingular(std::vector<std::vector<std::uint8_t>> m) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return false;
    std::swap(m[pivot], m[col]);
    const std::uint8_t inv = gf_inv_bruteforce(m[col][col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const std::uint8_t f = gf_mul_schoolbook(m[row][col], inv);
      for (std::size_t j = col; j < n; ++j) m[row][j] ^= gf_mul_schoolbook(f, m[col][j]);
    }
  }
  return true;
}

/// All k-element subsets of {1..n}, lexicographic.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t next) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = next; i <= n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

/// Y2 straight from its definition: min(x_t, max of the k smallest others).
inline double y2_by_definition(const std::vector<double>& x, std::size_t t, std::size_t k) {
  std::vector<double> others;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (i + 1 != t) others.push_back(x[i]);
  std::sort(others.begin(), others.end());
  return std::min(x[t - 1], others[k - 1]);
}

/// Kolmogorov-Smirnov sup distance between the empirical CDF of `samples`
/// and `cdf`.
template <class Cdf>
double ks_distance(std::vector<double> samples, const Cdf& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
  }
  return d;
}

/// Composite Gauss-Legendre (5 points per panel), fixed grid. Independent of
/// the adaptive Simpson routine under test.
template <class F>
double gauss_legendre(const F& f, double a, double b, int panels = 4000) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                              0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                              0.2369268850561891};
  const double h = (b - a) / panels;
  double sum = 0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) sum += w[i] * f(mid + 0.5 * h * x[i]);
  }
  return sum * 0.5 * h;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("mdsaccel_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace oracle
