#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbc {

  // Base class for every error thrown by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Malformed input: out-of-range generator indices, rank mismatches,
  // unparsable documents.
  class InputError : public Error {
   public:
    using Error::Error;
  };

  // A datum that parses but violates a structural requirement, e.g. a
  // suffix that is not strictly triangular.
  class ValidationError : public Error {
   public:
    ValidationError(std::string const& what, std::size_t generator = 0)
        : Error(what), _generator(generator) {}

    // 1-based generator the violation was found on, 0 if not applicable.
    std::size_t generator() const noexcept {
      return _generator;
    }

   private:
    std::size_t _generator;
  };

  // A caller broke an operation's documented precondition.
  class PreconditionError : public Error {
   public:
    using Error::Error;
  };

  // A configured size cap (matrix dimension, coset count, search nodes,
  // word length) would be exceeded.
  class ResourceError : public Error {
   public:
    using Error::Error;
  };

}  // namespace fbc
