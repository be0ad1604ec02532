#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pfaff {

enum class ErrorKind {
  ChartMismatch,
  CharacteristicMismatch,
  UnknownVariable,
  ZeroDenominator,
  DivisionByZero,
  NotExact,
  DegreeMismatch,
  ZeroForm,
  InvalidArgument,
  NotIntegrable,
  NotNormalized,
  VanishingLeadCoefficient,
  ZeroFunction,
  DecompositionFails,
  SequenceTooShort,
  RelationsFail,
  GaugeBreaksRelations,
  DegenerateFrame,
  PClosedCase,
  NotExpressible,
  GcdDegenerate,
  NotFinite,
  RadialFoliation,
  NotRadialCubicPart,
  VerificationFailed,
  Parse,
  Usage,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failure with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(ErrorKind::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace pfaff
