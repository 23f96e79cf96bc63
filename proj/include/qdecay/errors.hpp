#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdecay {

// Root of every exception thrown deliberately by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected parameters, grids, specs or configuration values.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An evaluator missed its accuracy target or hit a structural failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A series evaluation failed at a particular grid point.
class SeriesError : public NumericalError {
 public:
  SeriesError(const std::string& what, std::size_t index, double t)
      : NumericalError(what), index_(index), t_(t) {}

  std::size_t index() const noexcept { return index_; }
  double time() const noexcept { return t_; }

 private:
  std::size_t index_;
  double t_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdecay
