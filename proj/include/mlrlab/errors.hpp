#pragma once

#include <stdexcept>
#include <string>

namespace mlrlab {

// Base class for every error raised by the library. Callers that only care
// about "the fit failed" catch this; the subclasses carry the specifics.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The weighted Gram matrix of a least-squares solve is numerically singular.
// `context` names the caller's round or component, e.g. "phase1 round 2".
class DegenerateSystem : public Error {
 public:
  DegenerateSystem(const std::string& what, std::string context)
      : Error(context.empty() ? what : context + ": " + what),
        context_(std::move(context)) {}
  const std::string& context() const noexcept { return context_; }

 private:
  std::string context_;
};

// Phase-I threshold adaptation ran out of room (w_th cap or restart budget).
class ThresholdExhausted : public Error {
 public:
  ThresholdExhausted(const std::string& what, double last_w_th, int restarts)
      : Error(what), last_w_th_(last_w_th), restarts_(restarts) {}
  double last_w_th() const noexcept { return last_w_th_; }
  int restarts() const noexcept { return restarts_; }

 private:
  double last_w_th_;
  int restarts_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

// An EM mixture weight fell below 1/n.
class DegenerateComponent : public Error {
 public:
  DegenerateComponent(const std::string& what, int component)
      : Error(what), component_(component) {}
  int component() const noexcept { return component_; }

 private:
  int component_;
};

class Diverged : public Error {
 public:
  using Error::Error;
};

class ZeroVariance : public Error {
 public:
  using Error::Error;
};

class Indeterminate : public Error {
 public:
  using Error::Error;
};

class EmptyRange : public Error {
 public:
  using Error::Error;
};

class Inapplicable : public Error {
 public:
  using Error::Error;
};

class ConstantColumn : public Error {
 public:
  ConstantColumn(const std::string& what, std::string column)
      : Error(what), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class UnknownDataset : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mlrlab
