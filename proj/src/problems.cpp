#include "rbfpum/problems.hpp"

#include <cmath>

#include <fmt/format.h>

namespace rbfpum {

PoissonProblem::PoissonProblem(std::string name, ScalarField source, ScalarField boundary,
                               std::optional<ScalarField> exact)
    : name_(std::move(name)), source_(std::move(source)), boundary_(std::move(boundary)),
      exact_(std::move(exact)) {}

PoissonProblem PoissonProblem::manufactured(std::string name, ScalarField exact,
                                            ScalarField source) {
  return PoissonProblem(std::move(name), std::move(source), exact, exact);
}

double PoissonProblem::exact(const Point& x) const {
  if (!exact_)
    throw Error(fmt::format("problem '{}' has no exact solution", name_));
  return (*exact_)(x);
}

namespace {

double u1(const Point& p) {
  return std::exp(4.0 * p.x()) * std::cos(2.0 * p.x() + p.y()) / 20.0;
}

double f1(const Point& p) {
  const double e = std::exp(4.0 * p.x());
  const double t = 2.0 * p.x() + p.y();
  return e * (16.0 * std::sin(t) - 11.0 * std::cos(t)) / 20.0;
}

double u2(const Point& p) {
  const double c = std::cos(4.0 * p.x() * p.x() + p.y() * p.y() - 1.0);
  const double c2 = c * c;
  return 0.5 * p.y() * c2 * c2 + 0.25 * p.x();
}

double f2(const Point& p) {
  const double x = p.x(), y = p.y();
  const double q = 4.0 * x * x + y * y - 1.0;
  const double c = std::cos(q), s = std::sin(q);
  const double c2 = c * c;
  // v = cos^4(q): dv/dq = -4 c^3 s, d2v/dq2 = 12 c^2 s^2 - 4 c^4.
  const double dv = -4.0 * c2 * c * s;
  const double d2v = 12.0 * c2 * s * s - 4.0 * c2 * c2;
  const double qx = 8.0 * x, qy = 2.0 * y;
  const double lap_v = d2v * (qx * qx + qy * qy) + dv * (8.0 + 2.0);
  const double vy = dv * qy;
  return -(0.5 * y * lap_v + vy);
}

} // namespace

PoissonProblem make_problem(ProblemName name) {
  switch (name) {
  case ProblemName::U1:
    return PoissonProblem::manufactured("u1", u1, f1);
  case ProblemName::U2:
    return PoissonProblem::manufactured("u2", u2, f2);
  }
  throw ConfigError("unknown problem");
}

ProblemName parse_problem_name(const std::string& text) {
  if (text == "u1")
    return ProblemName::U1;
  if (text == "u2")
    return ProblemName::U2;
  throw ConfigError(fmt::format("unknown problem '{}' (expected u1 or u2)", text));
}

} // namespace rbfpum
