#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "qnrlab/linalg.hpp"

namespace qnrlab {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t hash_name(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return normal_(engine_); }
  std::uint64_t next() { return engine_(); }

  /// Standard complex Gaussian (E|z|^2 = 1).
  cplx cnormal() {
    constexpr double s = 0.70710678118654752440;
    const double re = normal();
    return {s * re, s * normal()};
  }

  CMatrix ginibre(Eigen::Index rows, Eigen::Index cols) {
    CMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = cnormal();
    return g;
  }

  CVector unit_vector(Eigen::Index n) {
    CVector v(n);
    double nv = 0.0;
    while (nv < 1e-12) {
      for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal();
      nv = v.norm();
    }
    return v / nv;
  }

  /// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
  CMatrix unitary(Eigen::Index n) {
    const CMatrix g = ginibre(n, n);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(r(i, i));
      if (a > 0.0) q.col(i) *= r(i, i) / a;
    }
    return q;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace qnrlab
