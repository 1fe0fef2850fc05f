#pragma once

#include <optional>
#include <string>
#include <vector>

#include "waveuio/linalg.hpp"
#include "waveuio/model.hpp"

namespace waveuio {

/// Verdict of one matrix inequality "S < 0".
struct Condition {
  double max_eig = 0.0;
  bool holds = false;
};

/// Outcome of a stability or H-infinity check. Conditions
/// that do not belong to the check performed are left empty.
struct CertificateReport {
  std::optional<Condition> pi;            ///< Pi < 0
  std::optional<Condition> second_ineq;   ///< -delta P D1 + delta P^2 + gamma^2 T^T T < 0
  std::optional<Condition> theta;         ///< Theta < 0
  Condition gamma_condition;              ///< Gamma - I < 0
  double delta = 0.0;
  double delta_bound = 0.0;
  bool delta_ok = false;
  /// Largest eigenvalue of the a44 block of Theta. Informational only:
  /// a44 is a principal block, so Theta < 0 already implies a44 < 0.
  std::optional<double> a44_max_eig;
  bool pass = false;

  /// Names of the failing conditions ("pi", "second_ineq", "theta",
  /// "gamma_condition", "delta_bound").
  std::vector<std::string> failed_conditions() const;

  /// Sum of the positive parts of every condition's distance to feasibility.
  double violation() const;
};

/// min{ lambda_min(P) / lambda_max(P), lambda_min(sym(P D1)) / lambda_max(P) }.
/// Throws NumericError if P or sym(P D1) is not positive definite.
double delta_bound(const Matrix& P, const Matrix& D1);

/// [[-B1^T P - P B1 + delta P + (delta/2) B1^T B1,  P M                      ],
///  [ M^T P,                                       -Gamma + (delta/2) M^T M ]]
/// Returned exactly symmetric.
Matrix build_pi(const Matrix& P, const Matrix& B1, const Matrix& M, const Matrix& Gamma,
                double delta);

/// -delta P D1 + delta P^2 + gamma^2 T^T T, symmetrized.
Matrix build_second_inequality(const Matrix& P, const Matrix& D1, const Matrix& T, double delta,
                               double gamma);

/// The 4x4 block matrix over (eps_t, eps, Delta f, d):
///   a11 = -B1^T P - P B1 + delta P + (delta/2) B1^T B1
///   a22 = -delta P D1 + delta P^2 + (1 + gamma^2) T^T T
///   a33 = -Gamma + (delta/2) M^T M
///   a44 = (1 + gamma^2) H^T E^T E H - mu^2 I
/// with P M coupling blocks (1,3) and (1 + gamma^2) T^T E H coupling (2,4).
/// Returned exactly symmetric. Throws ConfigError if cert.mu is absent or <= 0.
Matrix build_theta(const SystemSpec& sys, const ObserverSpec& obs, const Certificate& cert);

CertificateReport check_theorem1(const SystemSpec& sys, const ObserverSpec& obs,
                                 const Certificate& cert);

CertificateReport check_theorem2(const SystemSpec& sys, const ObserverSpec& obs,
                                 const Certificate& cert);

// ---------------------------------------------------------------------------
// Structured certificate search over P = p I, Gamma = g I.
// ---------------------------------------------------------------------------

struct SearchAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 2;

  /// lo + k (hi - lo) / (points - 1).
  double at(std::size_t k) const;
};

struct SearchSpec {
  SearchAxis p, g, delta;
  /// When present the H-infinity conditions are searched; otherwise only
  /// asymptotic stability.
  std::optional<SearchAxis> mu;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 1;
};

struct SearchResult {
  bool feasible = false;
  /// Best passing point, or the least-violating one when infeasible.
  Certificate certificate;
  CertificateReport report;
  double p = 0.0;
  double g = 0.0;
  std::size_t evaluated = 0;
};

/// Exhaustive grid scan. Among passing points the smallest mu wins, ties go to
/// the most negative Theta (stability-only: the most negative worst margin),
/// remaining ties to the earliest grid index. The result does not depend on
/// `threads`. Throws ConfigError for non-positive ranges or fewer than two
/// points on an axis.
SearchResult search_certificate(const SystemSpec& sys, const ObserverSpec& obs,
                                const SearchSpec& spec);

}  // namespace waveuio
