#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glvortex {

// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UndersampledLoop : public Error {
 public:
  using Error::Error;
};

class LoopThroughZero : public Error {
 public:
  using Error::Error;
};

// Raised when a boundary loop with nonzero winding is asked for a global phase.
class NoGlobalLift : public Error {
 public:
  NoGlobalLift(int winding)
      : Error("no global lift: boundary loop has winding number " + std::to_string(winding)),
        winding_(winding) {}
  int winding() const { return winding_; }

 private:
  int winding_;
};

class ProjectionUndefined : public Error {
 public:
  ProjectionUndefined(int i, int j, double total_modulus)
      : Error("projection undefined at node (" + std::to_string(i) + ", " + std::to_string(j) +
              "): sum of squared moduli " + std::to_string(total_modulus)),
        i_(i), j_(j) {}
  int i() const { return i_; }
  int j() const { return j_; }

 private:
  int i_, j_;
};

class AlphaUndefined : public Error {
 public:
  AlphaUndefined() : Error("alpha undefined: nonzero degree") {}
};

// A linear or eigenvalue iteration that ran out of iterations.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace glvortex
