#pragma once

#include <stdexcept>
#include <string>

namespace hilltails {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// bad argument outside the documented domain
class DomainError : public Error {
public:
  using Error::Error;
};

class PreconditionError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

// grid too coarse for the requested accuracy
class ResolutionError : public Error {
public:
  using Error::Error;
};

// radicand or ordering assumption violated in the spectral formulas
class SpectralOrderingError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

} // namespace hilltails
