#include "sfvem/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfvem/error.hpp"
#include "sfvem/monomials.hpp"

namespace sfvem {

const ScalarField& DirichletData::for_label(const std::string& label) const {
  if (auto it = by_label.find(label); it != by_label.end()) return it->second;
  if (fallback) return fallback;
  throw ConfigError("no Dirichlet data for boundary label '" + label + "'");
}

bool DirichletData::precedes(const std::string& a, const std::string& b) const {
  auto rank = [&](const std::string& s) {
    auto it = std::find(priority.begin(), priority.end(), s);
    return static_cast<std::size_t>(it - priority.begin());
  };
  const std::size_t ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

namespace {

ProblemData with_exact(std::string name, double kappa, VectorField beta, ExactSolution exact) {
  ProblemData p;
  p.name = std::move(name);
  p.kappa = kappa;
  p.beta = beta;
  p.source = [kappa, beta, exact](const Vec2& x) {
    return -kappa * exact.laplacian(x) + beta(x).dot(exact.gradient(x));
  };
  p.dirichlet.fallback = exact.value;
  p.exact = std::move(exact);
  return p;
}

VectorField constant_field(const Vec2& b) {
  return [b](const Vec2&) { return b; };
}

}  // namespace

ProblemData problem_test1() {
  const double c1 = 3.0 / std::sqrt(2.0 * std::numbers::pi);
  const double c2 = 0.5, c3 = 1000.0, c4 = 1000.0 / 3.3;

  struct Parts {
    double p, px, py, pxx, pyy, e, qx, qy;
  };
  auto parts = [=](const Vec2& v) {
    const double x = v.x(), y = v.y();
    const double dx = c2 - x, dy = c2 - y;
    Parts r;
    r.p = (x * x - x) * (y * y - y);
    r.px = (2 * x - 1) * (y * y - y);
    r.py = (x * x - x) * (2 * y - 1);
    r.pxx = 2 * (y * y - y);
    r.pyy = 2 * (x * x - x);
    r.e = std::exp(-c2 * (c4 * dx * dx + c3 * dy * dy - c3 * dx * dy));
    r.qx = c2 * (2 * c4 * dx - c3 * dy);
    r.qy = c2 * (2 * c3 * dy - c3 * dx);
    return r;
  };
  const double qxx = -2 * c2 * c4, qyy = -2 * c2 * c3;

  ExactSolution ex;
  ex.value = [=](const Vec2& v) {
    const Parts r = parts(v);
    return c1 * r.p * r.e;
  };
  ex.gradient = [=](const Vec2& v) {
    const Parts r = parts(v);
    return Vec2(c1 * r.e * (r.px + r.p * r.qx), c1 * r.e * (r.py + r.p * r.qy));
  };
  ex.laplacian = [=](const Vec2& v) {
    const Parts r = parts(v);
    const double uxx = r.pxx + 2 * r.px * r.qx + r.p * qxx + r.p * r.qx * r.qx;
    const double uyy = r.pyy + 2 * r.py * r.qy + r.p * qyy + r.p * r.qy * r.qy;
    return c1 * r.e * (uxx + uyy);
  };
  return with_exact("test1", 1e-9, constant_field(Vec2(1.0, 0.545)), std::move(ex));
}

ProblemData problem_test2() {
  ProblemData p;
  p.name = "test2";
  p.kappa = 1e-6;
  const double s = std::sqrt(0.5);
  p.beta = constant_field(Vec2(s, s));
  p.source = [](const Vec2&) { return 0.0; };
  p.dirichlet.priority = {"inflow1", "rest"};
  p.dirichlet.by_label["inflow1"] = [](const Vec2&) { return 1.0; };
  p.dirichlet.by_label["rest"] = [](const Vec2&) { return 0.0; };
  p.boundary_labeler = [](const Vec2& a, const Vec2& b) -> std::string {
    const bool left = std::abs(a.x()) < 1e-12 && std::abs(b.x()) < 1e-12;
    return left && 0.5 * (a.y() + b.y()) >= 0.2 ? "inflow1" : "rest";
  };
  return p;
}

ProblemData problem_smooth(double kappa, const Vec2& beta) {
  if (!(kappa > 0.0)) throw ConfigError("problem_smooth: kappa must be positive");
  constexpr double pi = std::numbers::pi;
  ExactSolution ex;
  ex.value = [](const Vec2& v) { return std::sin(pi * v.x()) * std::sin(pi * v.y()); };
  ex.gradient = [](const Vec2& v) {
    return Vec2(pi * std::cos(pi * v.x()) * std::sin(pi * v.y()), pi * std::sin(pi * v.x()) * std::cos(pi * v.y()));
  };
  ex.laplacian = [](const Vec2& v) { return -2 * pi * pi * std::sin(pi * v.x()) * std::sin(pi * v.y()); };
  return with_exact("smooth", kappa, constant_field(beta), std::move(ex));
}

ProblemData problem_polynomial(const std::vector<double>& coeffs, int degree, double kappa, const Vec2& beta) {
  const MonomialBasis basis(degree, Vec2::Zero(), 1.0);
  if (coeffs.size() != basis.size()) throw ConfigError("problem_polynomial: coefficient count mismatch");
  const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
  const auto grad = basis.grad_map();
  const Eigen::VectorXd cx = grad[0] * c, cy = grad[1] * c, cl = basis.laplace_map() * c;
  const MonomialBasis b1(std::max(degree - 1, 0), Vec2::Zero(), 1.0);
  const MonomialBasis b2(std::max(degree - 2, 0), Vec2::Zero(), 1.0);

  ExactSolution ex;
  ex.value = [basis, c](const Vec2& v) { return basis.values(v).dot(c); };
  ex.gradient = [b1, cx, cy](const Vec2& v) {
    const Eigen::VectorXd m = b1.values(v);
    return Vec2(m.dot(cx), m.dot(cy));
  };
  ex.laplacian = [b2, cl](const Vec2& v) { return b2.values(v).dot(cl); };
  return with_exact("polynomial", kappa, constant_field(beta), std::move(ex));
}

ProblemData make_problem(const std::string& name, double kappa, const Vec2& beta) {
  if (name == "test1") return problem_test1();
  if (name == "test2") return problem_test2();
  if (name == "smooth") return problem_smooth(kappa, beta);
  throw ConfigError("unknown problem '" + name + "' (expected test1, test2 or smooth)");
}

std::vector<std::string> problem_names() { return {"test1", "test2", "smooth"}; }

}  // namespace sfvem
