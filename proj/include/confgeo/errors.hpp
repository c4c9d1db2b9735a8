#pragma once

#include <stdexcept>
#include <string>

namespace confgeo {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };

// Linear algebra over indefinite inner products.
struct NearSingular : Error { using Error::Error; };
struct NullDirection : Error { using Error::Error; };

// Jet arithmetic.
struct DivisionByZeroJet : Error { using Error::Error; };

// Generic precondition / domain failures.
struct DomainError : Error { using Error::Error; };

// Expression / spec parsing.
struct SyntaxError : Error {
  int line = 0, col = 0;
  SyntaxError(const std::string& msg, int line_, int col_)
      : Error(msg + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
        line(line_), col(col_) {}
};
struct ArityError : Error { using Error::Error; };
struct UnknownFunction : Error { using Error::Error; };

// Catalog.
struct UnknownSurface : Error { using Error::Error; };
struct InvalidParam : Error { using Error::Error; };

// Geometry pipeline.
struct ConstraintViolation : Error { using Error::Error; };
struct DegenerateMetric : Error { using Error::Error; };
struct NullNormal : Error { using Error::Error; };
struct NotRegular : Error { using Error::Error; };
struct StencilLeftDomain : Error { using Error::Error; };
struct NotConformal : Error { using Error::Error; };

// Frame integration.
struct GramDrift : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };

}  // namespace confgeo
