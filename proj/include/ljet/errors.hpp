#pragma once

#include <stdexcept>
#include <string>

namespace ljet {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A precondition of an operation does not hold (e.g. n < 4, non-SPD metric).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed JSON text.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed JSON that does not follow the ljet-1 schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Schema-valid jet that violates a symmetry or trace constraint.
class ValidationError : public Error {
 public:
  using Error::Error;
};

enum class Degeneracy {
  kUmbilical,    // h = 0, mu = 0
  kSpecialType,  // det H below threshold
  kSingularPole, // det h below threshold
  kSingularSystem,
  kSingularChart,
  kFrameNotReduced,
  kMissingData,
};

const char* to_string(Degeneracy d);

// The pipeline reached a point where the geometry is degenerate and the
// requested object is undefined.
class DegenerateError : public Error {
 public:
  DegenerateError(Degeneracy kind, const std::string& what)
      : Error(what), kind_(kind) {}
  Degeneracy kind() const { return kind_; }

 private:
  Degeneracy kind_;
};

}  // namespace ljet
