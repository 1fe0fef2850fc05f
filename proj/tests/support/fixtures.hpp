#pragma once

// Test fixtures and brute-force oracles shared by the unit tests and the
// acceptance runner. Nothing here calls into the library's eigen machinery.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "waveuio/model.hpp"

namespace waveuio::testing {

inline Matrix scaled_identity(Index n, double a) { return a * Matrix::Identity(n, n); }

inline Matrix column(std::initializer_list<double> values) {
  Matrix m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

/// Two-channel example plant, matrices typed in by hand.
inline SystemSpec two_channel_system() {
  SystemSpec s;
  s.n = 2;
  s.p = 1;
  s.d_dim = 1;
  s.q = 2;
  s.A = scaled_identity(2, 2.0);
  s.B = scaled_identity(2, 4.0);
  s.D = scaled_identity(2, 4.5);
  s.C1 = Matrix(2, 2);
  s.C1 << 0.0, 0.25, 0.25, 0.0;
  s.C = Matrix(2, 2);
  s.C << 0.75, -0.75, -0.75, 0.75;
  s.G = column({2.0, 2.0});
  s.K = column({-2.0, -2.0});
  s.H = column({0.05, 0.05});
  s.F = column({0.1, -0.1});
  s.nonlinearity = NonlinearitySpec::sine(Vector::Constant(2, 0.1));
  s.gamma = 0.1;
  return s;
}

/// Matching observer for two_channel_system(), typed in by hand.
inline ObserverSpec two_channel_observer() {
  ObserverSpec o;
  o.A1 = scaled_identity(2, 2.0);
  o.B1 = scaled_identity(2, 4.0);
  o.D1 = scaled_identity(2, 4.5);
  o.M = scaled_identity(2, 0.95);
  o.T = scaled_identity(2, 100.0 / 95.0);
  o.G1 = column({5.7, -1.9});
  o.L = Matrix(2, 2);
  o.L << 0.95, 0.95, -0.95, -0.95;
  o.E = o.L;
  o.Q = column({3.8, -3.8});
  return o;
}

inline Certificate two_channel_certificate(double mu = 0.95) {
  Certificate c;
  c.P = scaled_identity(2, 2.5);
  c.Gamma = scaled_identity(2, 8.0 / 9.0);
  c.delta = 0.25;
  c.mu = mu;
  return c;
}

/// n = 1 plant with the given damping, no coupling, no nonlinearity.
inline SystemSpec scalar_system(double b = 1.0, double d = 1.0) {
  SystemSpec s;
  s.n = 1;
  s.p = 1;
  s.d_dim = 1;
  s.q = 1;
  s.A = Matrix::Ones(1, 1);
  s.B = Matrix::Constant(1, 1, b);
  s.D = Matrix::Constant(1, 1, d);
  s.C1 = Matrix::Zero(1, 1);
  s.C = Matrix::Zero(1, 1);
  s.G = Matrix::Zero(1, 1);
  s.F = Matrix::Zero(1, 1);
  s.K = Matrix::Zero(1, 1);
  s.H = Matrix::Zero(1, 1);
  return s;
}

/// Identity observer M = T = I, L = E = Q = 0 for a system with F = H = 0.
inline ObserverSpec identity_observer(const SystemSpec& s) {
  ObserverSpec o;
  o.A1 = s.A;
  o.B1 = s.B;
  o.D1 = s.D;
  o.M = Matrix::Identity(s.n, s.n);
  o.T = Matrix::Identity(s.n, s.n);
  o.G1 = s.G;
  o.L = Matrix::Zero(s.n, s.q);
  o.E = Matrix::Zero(s.n, s.q);
  o.Q = Matrix::Zero(s.n, s.p);
  return o;
}

// ---------------------------------------------------------------------------
// Characteristic-polynomial oracle
// ---------------------------------------------------------------------------

/// Coefficients c_0..c_n of det(lambda I - S) = sum c_k lambda^k (c_n = 1),
/// by the Faddeev-LeVerrier recursion.
inline std::vector<double> characteristic_polynomial(const Matrix& S) {
  const Index n = S.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Matrix Mk = Matrix::Zero(n, n);
  const Matrix I = Matrix::Identity(n, n);
  for (Index k = 1; k <= n; ++k) {
    Mk = S * Mk + c[static_cast<std::size_t>(n - k + 1)] * I;
    c[static_cast<std::size_t>(n - k)] = -(S * Mk).trace() / static_cast<double>(k);
  }
  return c;
}

/// A real-rooted polynomial has only negative roots iff all its coefficients
/// are positive (Descartes). Applied to det(lambda I - S) of a symmetric S
/// this decides S < 0 without an eigensolver.
inline bool charpoly_negative_definite(const Matrix& S) {
  const auto c = characteristic_polynomial(S);
  return std::all_of(c.begin(), c.end(), [](double v) { return v > 0.0; });
}

/// Largest eigenvalue of a symmetric 2x2 from the quadratic formula.
inline double max_eig_2x2(const Matrix& S) {
  const double tr = S(0, 0) + S(1, 1);
  const double det = S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
  return 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
}

/// Largest eigenvalue of a symmetric 3x3 from the trigonometric solution of
/// the depressed characteristic cubic.
inline double max_eig_3x3(const Matrix& S) {
  const double p1 = S(0, 1) * S(0, 1) + S(0, 2) * S(0, 2) + S(1, 2) * S(1, 2);
  const double q = S.trace() / 3.0;
  if (p1 == 0.0) return S.diagonal().maxCoeff();
  const double p2 = (S(0, 0) - q) * (S(0, 0) - q) + (S(1, 1) - q) * (S(1, 1) - q) +
                    (S(2, 2) - q) * (S(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Matrix Bm = (S - q * Matrix::Identity(3, 3)) / p;
  const double r = std::clamp(Bm.determinant() / 2.0, -1.0, 1.0);
  return q + 2.0 * p * std::cos(std::acos(r) / 3.0);
}

/// Random symmetric matrix with entries uniform in [-1, 1].
inline Matrix random_symmetric(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix S(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) S(i, j) = S(j, i) = u(rng);
  }
  return S;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("waveuio_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace waveuio::testing
