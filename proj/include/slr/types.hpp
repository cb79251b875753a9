#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace slr {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

using Index = Eigen::Index;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable tag, used in result files.
  virtual const char* tag() const noexcept { return "Error"; }
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "DimensionMismatch"; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "InvalidArgument"; }
};

/// No eigenvalue passes the gap rule: the spectrum cannot identify the permutation.
class EmptySelection : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "EmptySelection"; }
};

class RankDeficient : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "RankDeficient"; }
};

class RotationDegenerate : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "RotationDegenerate"; }
};

class ParseError : public Error {
 public:
  using Error::Error;
  const char* tag() const noexcept override { return "ParseError"; }
};

class UnsupportedFormat : public ParseError {
 public:
  using ParseError::ParseError;
  const char* tag() const noexcept override { return "UnsupportedFormat"; }
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

inline void require_dims(bool cond, const std::string& what) {
  if (!cond) throw DimensionMismatch(what);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace detail
}  // namespace slr
