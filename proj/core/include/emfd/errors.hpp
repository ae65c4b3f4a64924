#pragma once

#include <stdexcept>
#include <string>

namespace emfd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A triangulation violates the (local) Delaunay criterion.
class NotDelaunay : public Error {
 public:
  NotDelaunay(const std::string& what, int triangle, int vertex)
      : Error(what), triangle(triangle), vertex(vertex) {}
  int triangle;  // offending triangle id
  int vertex;    // vertex strictly inside its circumcircle
};

/// A circumcenter is not strictly inside its triangle, so the dual mesh degenerates.
class DegenerateDual : public Error {
 public:
  DegenerateDual(const std::string& what, int triangle) : Error(what), triangle(triangle) {}
  int triangle;
};

/// Circumcenter of (nearly) collinear points requested.
class CollinearPoints : public Error {
 public:
  using Error::Error;
};

/// Mesh input is structurally invalid (bad indices, non-manifold edges, ...).
class InvalidMesh : public Error {
 public:
  using Error::Error;
};

/// A quadrature input is NaN or infinite.
class NonfiniteInput : public Error {
 public:
  using Error::Error;
};

///// An exponential average came out non-positive: theta and phi are inconsistent.
class NonpositiveAverage : public Error {
 public:
  NonpositiveAverage(const std::string& what, int entity = -1) : Error(what), entity(entity) {}
  int entity;  // mesh entity id when raised during build_exp_averages
};

/// Sampled diffusion coefficient is not strictly positive.
class NonpositiveDiffusion : public Error {
 public:
  using Error::Error;
};

///// Vector (curl-curl) assembly with gamma == 0: the gradient kernel is untreated.
class SingularReaction : public Error {
 public:
  using Error::Error;
};

/// Direct factorization failed.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Iterative solver missed the residual target.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations, double residual)
      : Error(what), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

/// Expression text failed to parse.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position, std::string expected)
      : Error(what), position(position), expected(std::move(expected)) {}
  std::size_t position;
  std::string expected;
};

/// Expression evaluation produced a non-finite value (division by zero etc.).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Problem configuration is invalid (unknown key, missing field, bad value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace emfd
