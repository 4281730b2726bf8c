#pragma once

#include <stdexcept>
#include <string>

namespace morrey {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (non-finite samples, wrong sizes, unreadable files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a grid do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A truncation (time span or kernel periodization) is too coarse for the
/// requested accuracy. Carries the estimated omitted mass.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double estimated_tail)
      : Error(what), tail_(estimated_tail) {}
  double estimated_tail() const noexcept { return tail_; }

 private:
  double tail_;
};

/// Atom construction from a profile that is constant on its ball.
class DegenerateAtom : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace morrey
