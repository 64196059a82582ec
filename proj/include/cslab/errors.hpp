#ifndef CSLAB_ERRORS_HPP
#define CSLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cslab {

// Out-of-domain parameters and malformed inputs. The CLI maps these to exit 1.
class DomainError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public DomainError
{
public:
  using DomainError::DomainError;
};

// A_S (or any tall matrix) failed the relative injectivity test.
class RankDeficientError : public DomainError
{
public:
  RankDeficientError(const std::string& what, double sigma_min)
    : DomainError(what), sigma_min_(sigma_min)
  {}
  double sigma_min() const noexcept { return sigma_min_; }

private:
  double sigma_min_;
};

// Sample-complexity bound whose denominator (gamma) is not positive.
class NonpositiveDenominator : public DomainError
{
public:
  NonpositiveDenominator(const std::string& what, double gamma)
    : DomainError(what), gamma_(gamma)
  {}
  double gamma() const noexcept { return gamma_; }

private:
  double gamma_;
};

class InfeasibleError : public DomainError
{
public:
  using DomainError::DomainError;
};

// File system and parse failures. The CLI maps these to exit 2.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace cslab

#endif
