#pragma once

#include <stdexcept>
#include <string>

namespace kgaim {

/// Base class for every failure reported by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// Indicial discriminant negative: no real exponent exists.
class OvercriticalError : public DomainError
{
  public:
    using DomainError::DomainError;
};

/// |E| >= M or a requested state does not exist.
class NoBoundStateError : public Error
{
  public:
    using Error::Error;
};

/// A bracketed search found no sign change.
class NoRootError : public Error
{
  public:
    using Error::Error;
};

/// Iterative procedure did not converge.
class ConvergenceError : public Error
{
  public:
    using Error::Error;
};

/// Coefficients of an AIM iterate left the representable range.
class AimOverflowError : public Error
{
  public:
    AimOverflowError(int iteration, std::string const& what)
        : Error(what)
        , iteration_(iteration)
    {
    }
    int iteration() const noexcept { return iteration_; }

  private:
    int iteration_;
};

} // namespace kgaim
