#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace genecop {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside its mathematical domain (copula argument not in
/// (0,1), non-positive Weibull parameter, dependence parameter outside the
/// family's range, malformed basis specification, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A gene region violates its structural invariants: fewer than two variants,
/// positions not strictly increasing, or duplicate coordinates.
class InvalidRegionError : public Error {
 public:
  using Error::Error;
};

/// The genotype smoother cannot be formed for a subject (rank-deficient
/// least-squares system or too few observed genotype calls).
class SmootherError : public Error {
 public:
  using Error::Error;
};

/// The log-likelihood became non-finite at an interior parameter point.
/// Carries the id of the first offending subject.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& msg, std::string subject_id)
      : Error(msg + " (subject " + subject_id + ")"),
        subject_id_(std::move(subject_id)) {}
  const std::string& subject_id() const noexcept { return subject_id_; }

 private:
  std::string subject_id_;
};

/// An iterative procedure (optimizer, root finder, censoring calibration)
/// failed to reach its tolerance within the iteration budget, or produced an
/// internally inconsistent result.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A text input file could not be parsed.  Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& msg)
      : Error(path + ":" + std::to_string(line) + ": " + msg),
        path_(path),
        line_(line) {}
  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// Phenotype and genotype tables do not describe the same subjects.
class JoinError : public Error {
 public:
  using Error::Error;
};

/// A harness configuration (file or flags) is invalid or inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace genecop
