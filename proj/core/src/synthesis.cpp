#include "waveuio/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "waveuio/errors.hpp"

namespace waveuio {

namespace {

constexpr double kNullTol = 1e-10;

// Columns of V spanning the right null space of `coeff`.
Matrix right_nullspace(const Matrix& coeff, double rel_tol) {
  const Index cols = coeff.cols();
  if (coeff.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Index rank = 0;
  if (smax > 0.0) {
    for (Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > rel_tol * smax) ++rank;
    }
  }
  return svd.matrixV().rightCols(cols - rank);
}

}  // namespace

std::array<std::pair<std::string_view, double>, ResidualReport::kCount>
ResidualReport::entries() const {
  return {{{"A1M-MA", a1m_ma},
           {"B1M-MB", b1m_mb},
           {"D1M-MD", d1m_md},
           {"LH-MF", lh_mf},
           {"LK+G1-MG", lk_g1_mg},
           {"Q+LK", q_lk},
           {"LC", lc},
           {"TM-I", tm_i},
           {"E-L", e_l}}};
}

std::vector<Vector> left_nullspace(const Matrix& C, double rel_tol) {
  if (!C.allFinite()) throw NumericError("left_nullspace: non-finite matrix");
  const Index q = C.rows();
  std::vector<Vector> basis;
  if (q == 0) return basis;
  if (C.cols() == 0) {
    for (Index i = 0; i < q; ++i) basis.push_back(Vector::Unit(q, i));
    return basis;
  }
  // x^T C = 0  <=>  C^T x = 0
  const Matrix ns = right_nullspace(C.transpose(), rel_tol);
  basis.reserve(static_cast<std::size_t>(ns.cols()));
  for (Index j = 0; j < ns.cols(); ++j) basis.emplace_back(ns.col(j));
  return basis;
}

SynthesisSolution solve_scalar_m(const SystemSpec& sys, double alpha_scale) {
  require_consistent_shapes(sys);
  if (alpha_scale == 0.0 || !std::isfinite(alpha_scale)) {
    throw ConfigError("alpha_scale must be finite and nonzero");
  }
  const Index n = sys.n, q = sys.q, dd = sys.d_dim;
  const Index nl = n * q;  // entries of L, column-major

  // vec(L C) = (C^T kron I_n) vec(L),  vec(L H) = (H^T kron I_n) vec(L)
  Matrix coeff = Matrix::Zero(n * n + n * dd, nl + 1);
  const Matrix In = Matrix::Identity(n, n);
  for (Index i = 0; i < q; ++i) {
    for (Index j = 0; j < n; ++j) {
      coeff.block(j * n, i * n, n, n) = sys.C(i, j) * In;
    }
    for (Index j = 0; j < dd; ++j) {
      coeff.block(n * n + j * n, i * n, n, n) = sys.H(i, j) * In;
    }
  }
  coeff.block(n * n, nl, n * dd, 1) = -Eigen::Map<const Vector>(sys.F.data(), n * dd);

  const Matrix ns = right_nullspace(coeff, kNullTol);
  const Index dim = ns.cols();

  // Projection of the alpha axis onto the null space maximizes |alpha| among
  // unit null vectors.
  Vector best = Vector::Zero(nl + 1);
  if (dim > 0) best = ns * ns.row(nl).transpose();
  const double norm = best.norm();
  if (dim == 0 || norm <= kNullTol || std::abs(best(nl)) <= kNullTol * norm) {
    std::ostringstream os;
    os << "no scalar-M observer exists (null space dimension " << dim
       << ", no null vector with nonzero alpha component)";
    throw InfeasibleError(os.str(), dim);
  }
  best /= norm;
  const double scale = alpha_scale / best(nl);
  const Vector sol = scale * best;

  SynthesisSolution out;
  out.alpha = alpha_scale;
  out.nullspace_dim = dim;

  ObserverSpec& obs = out.observer;
  obs.L = Eigen::Map<const Matrix>(sol.data(), n, q);
  obs.E = obs.L;
  obs.M = alpha_scale * In;
  obs.T = (1.0 / alpha_scale) * In;
  obs.A1 = sys.A;
  obs.B1 = sys.B;
  obs.D1 = sys.D;
  const Matrix LK = obs.L * sys.K;
  obs.Q = -LK;
  obs.G1 = alpha_scale * sys.G - LK;

  out.residuals = verify_equations(sys, obs);
  return out;
}

ResidualReport verify_equations(const SystemSpec& sys, const ObserverSpec& obs) {
  require_consistent_shapes(sys, obs);
  const Matrix& M = obs.M;
  const Index n = sys.n;

  ResidualReport r;
  r.a1m_ma = (obs.A1 * M - M * sys.A).norm();
  r.b1m_mb = (obs.B1 * M - M * sys.B).norm();
  r.d1m_md = (obs.D1 * M - M * sys.D).norm();
  r.lh_mf = (obs.L * sys.H - M * sys.F).norm();
  r.lk_g1_mg = (obs.L * sys.K + obs.G1 - M * sys.G).norm();
  r.q_lk = (obs.Q + obs.L * sys.K).norm();
  r.lc = (obs.L * sys.C).norm();
  r.tm_i = (obs.T * M - Matrix::Identity(n, n)).norm();
  r.e_l = (obs.E - obs.L).norm();

  r.max_residual = 0.0;
  for (const auto& [name, value] : r.entries()) r.max_residual = std::max(r.max_residual, value);
  return r;
}

ObserverInitialState derive_observer_initial(const Matrix& what0, const Matrix& what1,
                                             const ObserverSpec& obs, const Vector& u0,
                                             const Vector& y0) {
  const Index n = obs.M.rows();
  if (obs.M.cols() != n || what0.rows() != n || what1.rows() != n ||
      what0.cols() != what1.cols()) {
    throw ShapeError("derive_observer_initial: inconsistent field or matrix shapes");
  }
  Eigen::FullPivLU<Matrix> lu(obs.M);
  if (!lu.isInvertible()) throw NumericError("derive_observer_initial: M is singular");

  const Vector offset = obs.Q * u0 + obs.E * y0;
  ObserverInitialState out;
  out.z0 = obs.M * (what0.colwise() - offset);
  out.z1 = obs.M * what1;
  return out;
}

}  // namespace waveuio
