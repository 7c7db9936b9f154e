#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rbfpum/common.hpp"

namespace rbfpum {

using ScalarField = std::function<double(const Point&)>;

/// -Laplacian(u) = f in the unit square, u = g on its boundary.
class PoissonProblem {
public:
  PoissonProblem(std::string name, ScalarField source, ScalarField boundary,
                 std::optional<ScalarField> exact = std::nullopt);

  /// Manufactured problem: f and g are given alongside the exact solution u.
  static PoissonProblem manufactured(std::string name, ScalarField exact, ScalarField source);

  const std::string& name() const noexcept { return name_; }
  bool has_exact() const noexcept { return exact_.has_value(); }

  double source(const Point& x) const { return source_(x); }
  double boundary(const Point& x) const { return boundary_(x); }
  /// Throws Error if the problem has no known solution.
  double exact(const Point& x) const;

private:
  std::string name_;
  ScalarField source_;
  ScalarField boundary_;
  std::optional<ScalarField> exact_;
};

enum class ProblemName { U1, U2 };

/// u1 = exp(4 x) cos(2 x + y) / 20 and
/// u2 = y cos^4(4 x^2 + y^2 - 1) / 2 + x / 4, with analytic sources.
PoissonProblem make_problem(ProblemName name);

/// Parses "u1" / "u2". Throws ConfigError otherwise.
ProblemName parse_problem_name(const std::string& text);

} // namespace rbfpum
