#pragma once

#include <string>
#include <vector>

#include "sfvem/problem.hpp"

namespace sfvem {

/// Interior Gaussian bump: kappa = 1e-9, beta = (1, 0.545), exact solution
/// with homogeneous boundary values.
ProblemData problem_test1();

/// Layers from a discontinuous inflow: kappa = 1e-6, beta at 45 degrees,
/// f = 0; g = 1 on the left side for y >= 0.2 ("inflow1"), 0 elsewhere ("rest").
ProblemData problem_test2();

/// u = sin(pi x) sin(pi y) with constant beta.
ProblemData problem_smooth(double kappa, const Vec2& beta);

/// Polynomial solution u = sum c_a x^a1 y^a2 with constant beta; Dirichlet
/// data is the trace of u. Used for patch tests.
ProblemData problem_polynomial(const std::vector<double>& coeffs, int degree, double kappa, const Vec2& beta);

/// Registry lookup: "test1", "test2", "smooth". kappa/beta override the
/// smooth problem only. Throws ConfigError on unknown names.
ProblemData make_problem(const std::string& name, double kappa = 1e-6, const Vec2& beta = Vec2(1.0, 0.545));

std::vector<std::string> problem_names();

}  // namespace sfvem
