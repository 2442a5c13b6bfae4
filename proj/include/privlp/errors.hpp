#ifndef PRIVLP_ERRORS_HPP
#define PRIVLP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace privlp {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// -- probability / instance construction ------------------------------------

class InvalidDistribution : public Error {
  public:
    explicit InvalidDistribution(const std::string& what) : Error(what) {}
};

class InvalidChannel : public Error {
  public:
    explicit InvalidChannel(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
  public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class ZeroReference : public Error {
  public:
    explicit ZeroReference(const std::string& what) : Error(what) {}
};

class MarginalMismatch : public Error {
  public:
    explicit MarginalMismatch(const std::string& what) : Error(what) {}
};

class MechanismInvariantViolation : public Error {
  public:
    explicit MechanismInvariantViolation(const std::string& what) : Error(what) {}
};

// -- row-space / omega enumeration ------------------------------------------

class RankDeficient : public Error {
  public:
    explicit RankDeficient(const std::string& what) : Error(what) {}
};

class HeadSingular : public Error {
  public:
    explicit HeadSingular(const std::string& what) : Error(what) {}
};

class NegativeEntry : public Error {
  public:
    explicit NegativeEntry(const std::string& what) : Error(what) {}
};

class NoFeasibleOmega : public Error {
  public:
    explicit NoFeasibleOmega(const std::string& what) : Error(what) {}
};

class ZeroBasePoint : public Error {
  public:
    explicit ZeroBasePoint(const std::string& what) : Error(what) {}
};

// -- linear programming -------------------------------------------------------

class LPInfeasible : public Error {
  public:
    explicit LPInfeasible(const std::string& what) : Error(what) {}
};

class LPUnbounded : public Error {
  public:
    explicit LPUnbounded(const std::string& what) : Error(what) {}
};

class IterationLimit : public Error {
  public:
    explicit IterationLimit(const std::string& what) : Error(what) {}
};

// -- design solvers -----------------------------------------------------------

class NotInHxy : public Error {
  public:
    explicit NotInHxy(const std::string& what) : Error(what) {}
};

class NoFeasibleCombination : public Error {
  public:
    explicit NoFeasibleCombination(const std::string& what) : Error(what) {}
};

class CombinationCapExceeded : public Error {
  public:
    explicit CombinationCapExceeded(const std::string& what) : Error(what) {}
};

class NumericalInconsistency : public Error {
  public:
    explicit NumericalInconsistency(const std::string& what) : Error(what) {}
};

class NotSquare : public Error {
  public:
    explicit NotSquare(const std::string& what) : Error(what) {}
};

class Singular : public Error {
  public:
    explicit Singular(const std::string& what) : Error(what) {}
};

// -- oracle / metrics ----------------------------------------------------------

class TooLarge : public Error {
  public:
    explicit TooLarge(const std::string& what) : Error(what) {}
};

class MissingValues : public Error {
  public:
    explicit MissingValues(const std::string& what) : Error(what) {}
};

class NotBinary : public Error {
  public:
    explicit NotBinary(const std::string& what) : Error(what) {}
};

class NotZeroMean : public Error {
  public:
    explicit NotZeroMean(const std::string& what) : Error(what) {}
};

class InvalidEta : public Error {
  public:
    explicit InvalidEta(const std::string& what) : Error(what) {}
};

// -- configuration --------------------------------------------------------------

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace privlp

#endif  // PRIVLP_ERRORS_HPP
