#include "waveuio/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "waveuio/errors.hpp"

namespace waveuio {

namespace {

Condition to_condition(const Matrix& S) {
  const DefinitenessCheck c = check_negative_definite(S);
  return {c.max_eig, c.negative_definite};
}

double excess(const Condition& c) { return c.holds ? 0.0 : std::max(0.0, c.max_eig); }

// Mirrors the strictly lower triangle onto the upper one so that S == S^T
// holds bit for bit.
void force_symmetric(Matrix& S) {
  for (Index j = 0; j < S.cols(); ++j) {
    for (Index i = j + 1; i < S.rows(); ++i) S(j, i) = S(i, j);
  }
}

void fill_common(CertificateReport& r, const SystemSpec& sys, const ObserverSpec& obs,
                 const Certificate& cert) {
  const Index n = sys.n;
  r.gamma_condition = to_condition(cert.Gamma - Matrix::Identity(n, n));
  r.delta = cert.delta;
  try {
    r.delta_bound = delta_bound(cert.P, obs.D1);
    r.delta_ok = cert.delta > 0.0 && cert.delta < r.delta_bound;
  } catch (const NumericError&) {
    r.delta_bound = 0.0;
    r.delta_ok = false;
  }
}

void require_certificate_shapes(const SystemSpec& sys, const ObserverSpec& obs,
                                const Certificate& cert) {
  require_consistent_shapes(sys, obs);
  if (cert.P.rows() != sys.n || cert.P.cols() != sys.n || cert.Gamma.rows() != sys.n ||
      cert.Gamma.cols() != sys.n) {
    throw ShapeError("certificate: P and Gamma must be n x n");
  }
}

}  // namespace

std::vector<std::string> CertificateReport::failed_conditions() const {
  std::vector<std::string> out;
  if (pi && !pi->holds) out.emplace_back("pi");
  if (second_ineq && !second_ineq->holds) out.emplace_back("second_ineq");
  if (theta && !theta->holds) out.emplace_back("theta");
  if (!gamma_condition.holds) out.emplace_back("gamma_condition");
  if (!delta_ok) out.emplace_back("delta_bound");
  return out;
}

double CertificateReport::violation() const {
  double v = 0.0;
  if (pi) v += excess(*pi);
  if (second_ineq) v += excess(*second_ineq);
  if (theta) v += excess(*theta);
  v += excess(gamma_condition);
  if (!delta_ok) v += std::max(0.0, delta - delta_bound) + (delta <= 0.0 ? -delta : 0.0);
  return v;
}

double delta_bound(const Matrix& P, const Matrix& D1) {
  const EigBounds p = sym_eig_bounds(P);
  const EigBounds pd = sym_eig_bounds(symmetrize(P * D1));
  if (!(p.min > 0.0)) throw NumericError("delta_bound: P is not positive definite");
  if (!(pd.min > 0.0)) throw NumericError("delta_bound: P D1 is not positive definite");
  return std::min(p.min / p.max, pd.min / p.max);
}

Matrix build_pi(const Matrix& P, const Matrix& B1, const Matrix& M, const Matrix& Gamma,
                double delta) {
  const Index n = P.rows();
  Matrix pi(2 * n, 2 * n);
  pi.topLeftCorner(n, n) = -B1.transpose() * P - P * B1 + delta * P +
                           (0.5 * delta) * (B1.transpose() * B1);
  pi.topRightCorner(n, n) = P * M;
  pi.bottomLeftCorner(n, n) = M.transpose() * P;
  pi.bottomRightCorner(n, n) = -Gamma + (0.5 * delta) * (M.transpose() * M);
  force_symmetric(pi);
  return pi;
}

Matrix build_second_inequality(const Matrix& P, const Matrix& D1, const Matrix& T, double delta,
                               double gamma) {
  return symmetrize(-delta * (P * D1) + delta * (P * P) + (gamma * gamma) * (T.transpose() * T));
}

Matrix build_theta(const SystemSpec& sys, const ObserverSpec& obs, const Certificate& cert) {
  if (!cert.mu || !(*cert.mu > 0.0)) {
    throw ConfigError("build_theta: certificate needs a positive mu");
  }
  require_certificate_shapes(sys, obs, cert);
  const Index n = sys.n, dd = sys.d_dim;
  const Matrix& P = cert.P;
  const double delta = cert.delta;
  const double lip = 1.0 + sys.gamma * sys.gamma;
  const double mu = *cert.mu;
  const Matrix EH = obs.E * sys.H;

  Matrix theta = Matrix::Zero(3 * n + dd, 3 * n + dd);
  // row blocks: 0 = eps_t, n = eps, 2n = Delta f, 3n = d
  theta.block(0, 0, n, n) = -obs.B1.transpose() * P - P * obs.B1 + delta * P +
                            (0.5 * delta) * (obs.B1.transpose() * obs.B1);
  theta.block(n, n, n, n) =
      -delta * (P * obs.D1) + delta * (P * P) + lip * (obs.T.transpose() * obs.T);
  theta.block(2 * n, 2 * n, n, n) = -cert.Gamma + (0.5 * delta) * (obs.M.transpose() * obs.M);
  theta.block(3 * n, 3 * n, dd, dd) =
      lip * (EH.transpose() * EH) - (mu * mu) * Matrix::Identity(dd, dd);
  theta.block(2 * n, 0, n, n) = obs.M.transpose() * P;
  theta.block(3 * n, n, dd, n) = lip * (EH.transpose() * obs.T);
  force_symmetric(theta);
  return theta;
}

CertificateReport check_theorem1(const SystemSpec& sys, const ObserverSpec& obs,
                                 const Certificate& cert) {
  require_certificate_shapes(sys, obs, cert);
  CertificateReport r;
  r.pi = to_condition(build_pi(cert.P, obs.B1, obs.M, cert.Gamma, cert.delta));
  r.second_ineq =
      to_condition(build_second_inequality(cert.P, obs.D1, obs.T, cert.delta, sys.gamma));
  fill_common(r, sys, obs, cert);
  r.pass = r.pi->holds && r.second_ineq->holds && r.gamma_condition.holds && r.delta_ok;
  return r;
}

CertificateReport check_theorem2(const SystemSpec& sys, const ObserverSpec& obs,
                                 const Certificate& cert) {
  const Matrix theta = build_theta(sys, obs, cert);
  CertificateReport r;
  r.theta = to_condition(theta);
  const Index n = sys.n, dd = sys.d_dim;
  r.a44_max_eig = sym_eig_bounds(theta.block(3 * n, 3 * n, dd, dd)).max;
  fill_common(r, sys, obs, cert);
  r.pass = r.theta->holds && r.gamma_condition.holds && r.delta_ok;
  return r;
}

// --- search ----------------------------------------------------------------

double SearchAxis::at(std::size_t k) const {
  if (k + 1 == points) return hi;
  return lo + static_cast<double>(k) * (hi - lo) / static_cast<double>(points - 1);
}

namespace {

struct Candidate {
  std::size_t index = std::numeric_limits<std::size_t>::max();
  bool feasible = false;
  double mu = std::numeric_limits<double>::infinity();
  double margin = std::numeric_limits<double>::infinity();  // most negative is best
  double violation = std::numeric_limits<double>::infinity();
  Certificate certificate;
  CertificateReport report;
  double p = 0.0, g = 0.0;
};

// Strict "a is better than b" total order; the grid index breaks all ties.
bool better(const Candidate& a, const Candidate& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.feasible) {
    if (a.mu != b.mu) return a.mu < b.mu;
    if (a.margin != b.margin) return a.margin < b.margin;
  } else if (a.violation != b.violation) {
    return a.violation < b.violation;
  }
  return a.index < b.index;
}

void validate_axis(const SearchAxis& a, const char* name) {
  if (!(a.lo > 0.0) || !(a.hi >= a.lo) || !std::isfinite(a.hi)) {
    throw ConfigError(std::string("search range for ") + name + " must be positive with lo <= hi");
  }
  if (a.points < 2) {
    throw ConfigError(std::string("search grid for ") + name + " needs at least 2 points");
  }
}

}  // namespace

SearchResult search_certificate(const SystemSpec& sys, const ObserverSpec& obs,
                                const SearchSpec& spec) {
  validate_axis(spec.p, "p");
  validate_axis(spec.g, "g");
  validate_axis(spec.delta, "delta");
  if (spec.mu) validate_axis(*spec.mu, "mu");
  require_consistent_shapes(sys, obs);

  const std::size_t np = spec.p.points, ng = spec.g.points, nd = spec.delta.points;
  const std::size_t nm = spec.mu ? spec.mu->points : 1;
  const std::size_t total = np * ng * nd * nm;
  const Index n = sys.n;

  auto evaluate = [&](std::size_t idx) {
    std::size_t rest = idx;
    const std::size_t im = rest % nm;
    rest /= nm;
    const std::size_t id = rest % nd;
    rest /= nd;
    const std::size_t ig = rest % ng;
    const std::size_t ip = rest / ng;

    Candidate c;
    c.index = idx;
    c.p = spec.p.at(ip);
    c.g = spec.g.at(ig);
    std::optional<double> mu;
    if (spec.mu) mu = spec.mu->at(im);
    c.certificate = Certificate::scalar(n, c.p, c.g, spec.delta.at(id), mu);
    if (spec.mu) {
      c.report = check_theorem2(sys, obs, c.certificate);
      c.mu = *mu;
      c.margin = c.report.theta->max_eig;
    } else {
      c.report = check_theorem1(sys, obs, c.certificate);
      c.mu = 0.0;
      c.margin = std::max({c.report.pi->max_eig, c.report.second_ineq->max_eig,
                           c.report.gamma_condition.max_eig});
    }
    c.feasible = c.report.pass;
    c.violation = c.report.violation();
    return c;
  };

  unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : spec.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

  std::vector<Candidate> best(threads);
  auto worker = [&](unsigned w) {
    // Strided partition; every worker keeps its own best.
    for (std::size_t idx = w; idx < total; idx += threads) {
      Candidate c = evaluate(idx);
      if (best[w].index == std::numeric_limits<std::size_t>::max() || better(c, best[w])) {
        best[w] = std::move(c);
      }
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  Candidate winner = std::move(best[0]);
  for (unsigned w = 1; w < threads; ++w) {
    if (better(best[w], winner)) winner = std::move(best[w]);
  }

  SearchResult out;
  out.feasible = winner.feasible;
  out.certificate = std::move(winner.certificate);
  out.report = std::move(winner.report);
  out.p = winner.p;
  out.g = winner.g;
  out.evaluated = total;
  return out;
}

}  // namespace waveuio
