#ifndef LRDUSTAT_ERRORS_HPP
#define LRDUSTAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lrdustat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A user-supplied parameter is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed (non-finite values, too short, unreadable).
class InputError : public Error {
 public:
  using Error::Error;
};

/// The circulant embedding of a covariance sequence is not nonnegative definite.
class NonEmbeddableError : public Error {
 public:
  using Error::Error;
};

/// A tabulated transform was evaluated outside its table.
class ExtrapolationError : public Error {
 public:
  using Error::Error;
};

/// No coefficient exceeded the rank tolerance up to the stored degree.
class RankNotFound : public Error {
 public:
  explicit RankNotFound(int max_degree)
      : Error("Hermite rank not found up to total degree " + std::to_string(max_degree) +
              "; raise Q or supply the rank"),
        max_degree_(max_degree) {}
  int max_degree() const noexcept { return max_degree_; }

 private:
  int max_degree_;
};

/// m * D >= 1: the non-central limit regime does not apply.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// An object was used in a state that does not allow the operation.
class StateError : public Error {
 public:
  using Error::Error;
};

/// The requested combination is not supported by the implementation.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A numerical computation produced non-finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace lrdustat

#endif  // LRDUSTAT_ERRORS_HPP
