#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sasaki {

/// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: grid too small, unknown option, bad tolerance.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A potential left the admissible cone (volume-ratio field not positive).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double margin)
      : Error(what), margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

/// The grid cannot resolve what was asked of it.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Fields sampled on different grids were combined.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Newton or time stepping gave up. Carries the per-iteration residual trace.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace sasaki
