#include "sfvem/supg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfvem/error.hpp"

namespace sfvem {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

Eigen::Map<const Eigen::VectorXd> weights_of(const QuadRule& rule) {
  return {rule.weights.data(), idx(rule.weights.size())};
}

// Values of a projected gradient at the volume points: nq x ndof per component.
struct PointGradients {
  Eigen::MatrixXd x, y;
};

PointGradients at_points(const LocalSpace& space, const GradientProjection& g) {
  const MonomialBasis basis = space.basis(g.degree);
  const Eigen::MatrixXd m = basis.eval(space.geometry().volume_rule().points);
  return {m.transpose() * g.x, m.transpose() * g.y};
}

// (beta . v)(q, i) for projected gradients v.
Eigen::MatrixXd streamline(const LocalSpace& space, const PointGradients& g, const VectorField& beta) {
  const auto& pts = space.geometry().volume_rule().points;
  Eigen::MatrixXd out(g.x.rows(), g.x.cols());
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const Vec2 b = beta(pts[q]);
    out.row(idx(q)) = b.x() * g.x.row(idx(q)) + b.y() * g.y.row(idx(q));
  }
  return out;
}

}  // namespace

double beta_sup(const ElementGeometry& geom, const VectorField& beta) {
  double sup = 0.0;
  for (const auto& p : geom.volume_rule().points) sup = std::max(sup, beta(p).norm());
  for (const auto& e : geom.edges())
    for (const auto& p : e.points) sup = std::max(sup, beta(p).norm());
  return sup;
}

double tilde_C_k(const ElementGeometry& geom, int k) {
  if (k < 2) throw Error("tilde_C_k: defined for k > 1 only");
  if (geom.volume_degree() < 2 * k) throw Error("tilde_C_k: quadrature degree too low");
  const MonomialBasis basis(k, geom);
  const Eigen::MatrixXd s = stiffness_matrix(basis, geom);
  const MonomialBasis low(k - 2, geom);
  const Eigen::MatrixXd lap = basis.laplace_map();
  const Eigen::MatrixXd l = lap.transpose() * mass_matrix(low, geom) * lap;
  // Constants lie in the kernel of both forms; the remaining block of S is SPD.
  const auto n = s.rows() - 1;
  const Eigen::MatrixXd s1 = s.bottomRightCorner(n, n);
  const Eigen::MatrixXd l1 = 0.5 * (l.bottomRightCorner(n, n) + l.bottomRightCorner(n, n).transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(l1, s1, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw GeometryError("tilde_C_k: eigen solve failed");
  const double mu = eig.eigenvalues().maxCoeff();
  const double h = geom.diameter();
  return 1.0 / (h * h * mu);
}

PecletTau peclet_tau(double diameter, double beta_E, double kappa, double m_k) {
  if (!(kappa > 0.0)) throw ConfigError("peclet_tau: kappa must be positive");
  if (beta_E <= 0.0) return {0.0, 0.0};
  PecletTau out;
  out.peclet = m_k * beta_E * diameter / kappa;
  out.tau = diameter / (2.0 * beta_E) * std::min(1.0, out.peclet);
  return out;
}

ElementCoefficients element_coefficients(const ElementGeometry& geom, int k, double kappa,
                                         const VectorField& beta) {
  ElementCoefficients c;
  c.kappa = kappa;
  c.diameter = geom.diameter();
  c.beta_sup = beta_sup(geom, beta);
  if (k == 1) {
    c.m_k = 1.0 / 3.0;
  } else {
    c.tilde_c = tilde_C_k(geom, k);
    c.m_k = 2.0 * c.tilde_c;
  }
  const PecletTau pt = peclet_tau(c.diameter, c.beta_sup, kappa, c.m_k);
  c.peclet = pt.peclet;
  c.tau = pt.tau;
  return c;
}

Eigen::MatrixXd probe_matrix(const LocalSpace& space) {
  const auto& g = space.grad_high();
  const auto n = g.x.rows();
  const Eigen::MatrixXd h = space.mass().topLeftCorner(n, n);
  Eigen::MatrixXd a = g.x.transpose() * h * g.x + g.y.transpose() * h * g.y;
  return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd directional_probe_matrix(const LocalSpace& space, int d) {
  const auto& g = space.grad_high();
  const Eigen::MatrixXd& c = d == 0 ? g.x : g.y;
  const auto n = c.rows();
  Eigen::MatrixXd a = c.transpose() * space.mass().topLeftCorner(n, n) * c;
  return 0.5 * (a + a.transpose());
}

namespace {

struct Spectrum {
  int below = 0;
  double ratio = 0.0;
};

Spectrum relative_spectrum(const Eigen::MatrixXd& a, double tol_rel) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double lmax = lam(lam.size() - 1);
  Spectrum s;
  s.ratio = lam.size() > 1 ? lam(1) / lmax : 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) < tol_rel * lmax) ++s.below;
  return s;
}

}  // namespace

ProbeStep coercivity_step(const LocalSpace& space, double tol_rel, ProbeCriterion criterion) {
  const Spectrum full = relative_spectrum(probe_matrix(space), tol_rel);
  ProbeStep step;
  step.ell = space.ell();
  step.ratio = full.ratio;
  step.below_threshold = full.below;
  step.gradient_passed = full.below == 1;
  step.passed = step.gradient_passed;
  if (criterion == ProbeCriterion::Directional) {
    for (int d = 0; d < 2; ++d) {
      step.directional_below[static_cast<std::size_t>(d)] =
          relative_spectrum(directional_probe_matrix(space, d), tol_rel).below;
      step.passed = step.passed && step.directional_below[static_cast<std::size_t>(d)] == space.k() + 1;
    }
  }
  return step;
}

ProbeResult probe_min_ell(const Polygon& polygon, int k, int ell_max, double tol_rel, ProbeCriterion criterion) {
  if (ell_max < 0) throw ConfigError("probe_min_ell: ell_max must be >= 0");
  ProbeResult res;
  for (int ell = 0; ell <= ell_max; ++ell) {
    const LocalSpace space(polygon, k, ell);
    res.trace.push_back(coercivity_step(space, tol_rel, criterion));
    if (res.trace.back().passed) {
      res.ell = ell;
      return res;
    }
  }
  std::ostringstream msg;
  msg << "probe_min_ell: no ell <= " << ell_max << " passes for k=" << k << " (lambda2/lambda_max:";
  for (const auto& s : res.trace)
    msg << " ell=" << s.ell << ":" << s.ratio << " [x:" << s.directional_below[0] << " y:" << s.directional_below[1] << "]";
  msg << ")";
  throw ProbeError(msg.str());
}

Eigen::MatrixXd local_a_h(const LocalSpace& space, const ElementCoefficients& coeffs, const VectorField& beta) {
  const Eigen::MatrixXd a_diff = probe_matrix(space);
  Eigen::MatrixXd a = coeffs.kappa * a_diff;
  if (coeffs.tau > 0.0) {
    const Eigen::MatrixXd bg = streamline(space, at_points(space, space.grad_high()), beta);
    const auto w = weights_of(space.geometry().volume_rule());
    a += coeffs.tau * (bg.transpose() * w.asDiagonal() * bg);
  }
  return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd local_b_h(const LocalSpace& space, const VectorField& beta) {
  const auto& rule = space.geometry().volume_rule();
  const Eigen::MatrixXd bg = streamline(space, at_points(space, space.grad_low()), beta);
  const MonomialBasis low = space.basis(space.k() - 1);
  const Eigen::MatrixXd values = low.eval(rule.points).transpose() * space.pizero_low();
  return values.transpose() * weights_of(rule).asDiagonal() * bg;
}

Eigen::MatrixXd local_d_h(const LocalSpace& space, const ElementCoefficients& coeffs, const VectorField& beta) {
  const auto n = idx(space.num_dofs());
  if (space.k() == 1 || coeffs.tau == 0.0) return Eigen::MatrixXd::Zero(n, n);
  const auto& rule = space.geometry().volume_rule();
  const auto& gl = space.grad_low();
  const MonomialBasis low = space.basis(gl.degree);
  Eigen::MatrixXd stacked(2 * gl.x.rows(), n);
  stacked << gl.x, gl.y;
  const Eigen::MatrixXd div_coeff = div_map(low) * stacked;
  const MonomialBasis lower = space.basis(gl.degree - 1);
  const Eigen::MatrixXd div_vals = lower.eval(rule.points).transpose() * div_coeff;
  const Eigen::MatrixXd bg = streamline(space, at_points(space, space.grad_high()), beta);
  return -coeffs.tau * coeffs.kappa * (bg.transpose() * weights_of(rule).asDiagonal() * div_vals);
}

Eigen::VectorXd local_rhs(const LocalSpace& space, const ElementCoefficients& coeffs, const VectorField& beta,
                          const ScalarField& source) {
  const auto& rule = space.geometry().volume_rule();
  Eigen::VectorXd fw(idx(rule.size()));
  for (std::size_t q = 0; q < rule.size(); ++q) fw(idx(q)) = rule.weights[q] * source(rule.points[q]);
  const MonomialBasis low = space.basis(space.k() - 1);
  Eigen::MatrixXd test = low.eval(rule.points).transpose() * space.pizero_low();
  if (coeffs.tau > 0.0) test += coeffs.tau * streamline(space, at_points(space, space.grad_high()), beta);
  return test.transpose() * fw;
}

LocalForms stabilization_free_forms(const LocalSpace& space, const ElementCoefficients& coeffs,
                                    const ProblemData& problem) {
  LocalForms f;
  f.a = local_a_h(space, coeffs, problem.beta);
  f.b = local_b_h(space, problem.beta);
  f.d = local_d_h(space, coeffs, problem.beta);
  f.s = Eigen::MatrixXd::Zero(f.a.rows(), f.a.cols());
  f.load = local_rhs(space, coeffs, problem.beta, problem.source);
  return f;
}

double baseline_sigma(const ElementCoefficients& coeffs) {
  return coeffs.kappa + coeffs.tau * coeffs.beta_sup * coeffs.beta_sup;
}

Eigen::MatrixXd dofi_stabilization(const LocalSpace& space, double sigma) {
  const auto n = idx(space.num_dofs());
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n) - space.pinabla().dof;
  return sigma * (r.transpose() * r);
}

LocalForms baseline_vem_forms(const LocalSpace& space, const ElementCoefficients& coeffs,
                              const ProblemData& problem, double sigma_scale) {
  if (space.ell() != 0) throw Error("baseline_vem_forms: requires the ell = 0 space");
  LocalForms f = stabilization_free_forms(space, coeffs, problem);
  f.s = dofi_stabilization(space, sigma_scale * baseline_sigma(coeffs));
  return f;
}

}  // namespace sfvem
