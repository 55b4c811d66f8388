#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "sfvem/local_space.hpp"
#include "sfvem/problem.hpp"

namespace sfvem {

/// Per-element SUPG parameters.
struct ElementCoefficients {
  double kappa = 0.0;
  double beta_sup = 0.0;  ///< max |beta| over the element's quadrature points
  double diameter = 0.0;
  double tilde_c = 0.0;   ///< inverse-inequality constant (k > 1 only)
  double m_k = 0.0;
  double peclet = 0.0;
  double tau = 0.0;
};

/// max |beta| over volume and edge quadrature points.
double beta_sup(const ElementGeometry& geom, const VectorField& beta);

/// Largest C with C h^2 |lap p|^2 <= |grad p|^2 on P_k(E), k >= 2.
double tilde_C_k(const ElementGeometry& geom, int k);

struct PecletTau {
  double peclet = 0.0;
  double tau = 0.0;
};

/// Pe = m_k beta h / kappa, tau = h / (2 beta) min(1, Pe); both zero when
/// beta vanishes.
PecletTau peclet_tau(double diameter, double beta_E, double kappa, double m_k);

/// m_1 = 1/3, m_k = 2 tilde_C_k otherwise.
ElementCoefficients element_coefficients(const ElementGeometry& geom, int k, double kappa,
                                         const VectorField& beta);

/// A^E_ij = (Pi0_{k+ell-1} grad phi_i, Pi0_{k+ell-1} grad phi_j).
Eigen::MatrixXd probe_matrix(const LocalSpace& space);

/// A^E_d = (Pi0_{k+ell-1} d_d phi_i, Pi0_{k+ell-1} d_d phi_j) for d = 0 (x) or 1 (y).
Eigen::MatrixXd directional_probe_matrix(const LocalSpace& space, int d);

enum class ProbeCriterion {
  /// A^E alone: exactly one eigenvalue below tol * lambda_max.
  Gradient,
  /// Additionally each A^E_d has exactly k+1 eigenvalues below tol times
  /// its largest one, i.e. no kernel beyond the polynomials of one variable.
  /// Needed for the streamline term tau |beta . Pi0 grad v|^2.
  Directional,
};

struct ProbeStep {
  int ell = 0;
  double ratio = 0.0;       ///< lambda_2 / lambda_max of A^E
  int below_threshold = 0;  ///< eigenvalues of A^E below tol * lambda_max
  std::array<int, 2> directional_below{0, 0};  ///< same count for A^E_x, A^E_y
  bool gradient_passed = false;
  bool passed = false;
};

ProbeStep coercivity_step(const LocalSpace& space, double tol_rel,
                          ProbeCriterion criterion = ProbeCriterion::Directional);

struct ProbeResult {
  int ell = -1;
  std::vector<ProbeStep> trace;
};

/// Smallest ell in [0, ell_max] passing coercivity_step. Throws ProbeError
/// carrying the eigenvalue trace otherwise.
ProbeResult probe_min_ell(const Polygon& polygon, int k, int ell_max = 6, double tol_rel = 1e-8,
                          ProbeCriterion criterion = ProbeCriterion::Directional);

/// Local matrices (row = test DOF, column = trial DOF) and load vector.
struct LocalForms {
  Eigen::MatrixXd a, b, d, s;
  Eigen::VectorXd load;

  Eigen::MatrixXd system() const { return a + b + d + s; }
};

Eigen::MatrixXd local_a_h(const LocalSpace& space, const ElementCoefficients& coeffs, const VectorField& beta);
Eigen::MatrixXd local_b_h(const LocalSpace& space, const VectorField& beta);
Eigen::MatrixXd local_d_h(const LocalSpace& space, const ElementCoefficients& coeffs, const VectorField& beta);
Eigen::VectorXd local_rhs(const LocalSpace& space, const ElementCoefficients& coeffs, const VectorField& beta,
                          const ScalarField& source);

/// Stabilisation-free forms on the enlarged space (s = 0).
LocalForms stabilization_free_forms(const LocalSpace& space, const ElementCoefficients& coeffs,
                                    const ProblemData& problem);

/// sigma_E = kappa + tau beta_E^2.
double baseline_sigma(const ElementCoefficients& coeffs);

/// dofi-dofi term sigma (I - PiNabla)^T (I - PiNabla).
Eigen::MatrixXd dofi_stabilization(const LocalSpace& space, double sigma);

/// Classical stabilised SUPG-VEM on the ell = 0 space. sigma_scale
/// multiplies baseline_sigma.
LocalForms baseline_vem_forms(const LocalSpace& space, const ElementCoefficients& coeffs,
                              const ProblemData& problem, double sigma_scale = 1.0);

}  // namespace sfvem
