#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfvem/local_space.hpp"

namespace sfvem {

struct ExactSolution {
  ScalarField value;
  VectorField gradient;
  ScalarField laplacian;
};

/// Dirichlet data keyed by boundary label. A vertex shared by edges with
/// different labels takes the value of the label ranked first: labels in
/// `priority` order, then all other labels alphabetically.
struct DirichletData {
  std::vector<std::string> priority;
  std::map<std::string, ScalarField> by_label;
  ScalarField fallback;  ///< used for labels without an entry

  /// Throws ConfigError when neither an entry nor a fallback exists.
  const ScalarField& for_label(const std::string& label) const;
  /// True when a ranks strictly before b.
  bool precedes(const std::string& a, const std::string& b) const;
};

/// -kappa lap u + beta . grad u = f with Dirichlet data on the whole boundary.
struct ProblemData {
  std::string name;
  double kappa = 1.0;
  VectorField beta;
  ScalarField source;
  DirichletData dirichlet;
  /// Optional relabelling of boundary edges (start, end) before solving.
  std::function<std::string(const Vec2&, const Vec2&)> boundary_labeler;
  std::optional<ExactSolution> exact;
};

}  // namespace sfvem
