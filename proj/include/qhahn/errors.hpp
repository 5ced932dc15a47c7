#pragma once

#include <stdexcept>
#include <string>

namespace qhahn {

// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument (index range, parameter domain) was violated.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

// max_terms was exhausted before the tail bound fell below eps.
class TailNotReached : public Error {
 public:
  using Error::Error;
};

// A lower parameter of a hypergeometric series hit q^{-m}.
class PoleInLower : public Error {
 public:
  using Error::Error;
};

// Series inversion with a (numerically) zero constant term.
class SingularSeries : public Error {
 public:
  using Error::Error;
};

// q-derivative requested at x = 0.
class ZeroPoint : public Error {
 public:
  using Error::Error;
};

// A parameter that must be nonzero was zero.
class ZeroParameter : public Error {
 public:
  using Error::Error;
};

// The sampler could not find a tuple inside an identity's domain.
class DomainTooTight : public Error {
 public:
  using Error::Error;
};

}  // namespace qhahn
