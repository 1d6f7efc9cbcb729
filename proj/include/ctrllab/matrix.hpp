#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "ctrllab/errors.hpp"

namespace ctrllab {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged integer matrix literal");
      for (long v : r) data_.emplace_back(v);
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(data_[a * cols_ + j], data_[b * cols_ + j]);
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Symmetric integer matrix. Every write goes to both (i,j) and (j,i), so
/// the symmetry invariant cannot be broken through this interface.
class IntSymMatrix {
 public:
  IntSymMatrix() = default;
  explicit IntSymMatrix(std::size_t n) : m_(n, n) {}

  /// Throws ParameterError if `m` is not square and symmetric.
  explicit IntSymMatrix(IntMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DimensionError("IntSymMatrix: matrix is not square");
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = i + 1; j < m_.cols(); ++j)
        if (m_(i, j) != m_(j, i)) throw ParameterError("IntSymMatrix: matrix is not symmetric");
  }

  IntSymMatrix(std::initializer_list<std::initializer_list<long>> rows)
      : IntSymMatrix(IntMatrix(rows)) {}

  std::size_t size() const noexcept { return m_.rows(); }

  const Integer& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  void set(std::size_t i, std::size_t j, const Integer& v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  const IntMatrix& matrix() const noexcept { return m_; }

  friend bool operator==(const IntSymMatrix&, const IntSymMatrix&) = default;

 private:
  IntMatrix m_;
};

/// Symmetric double matrix; writes mirror the upper triangle exactly.
class RealSymMatrix {
 public:
  RealSymMatrix() = default;
  explicit RealSymMatrix(std::size_t n) : m_(Eigen::MatrixXd::Zero(n, n)) {}

  /// Throws ParameterError unless `m` is exactly symmetric.
  explicit RealSymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DimensionError("RealSymMatrix: matrix is not square");
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
      for (Eigen::Index j = i + 1; j < m_.cols(); ++j)
        if (m_(i, j) != m_(j, i)) throw ParameterError("RealSymMatrix: matrix is not symmetric");
  }

  RealSymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    Eigen::Index i = 0;
    for (const auto& r : rows) {
      if (static_cast<Eigen::Index>(r.size()) != n) throw DimensionError("RealSymMatrix: ragged literal");
      Eigen::Index j = 0;
      for (double v : r) m(i, j++) = v;
      ++i;
    }
    *this = RealSymMatrix(std::move(m));
  }

  static RealSymMatrix diagonal(std::span<const double> d) {
    RealSymMatrix a(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) a.set(i, i, d[i]);
    return a;
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }

  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  void set(std::size_t i, std::size_t j, double v) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    m_(a, b) = v;
    m_(b, a) = v;
  }

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

  RealSymMatrix& operator+=(const RealSymMatrix& other) {
    if (other.size() != size()) throw DimensionError("RealSymMatrix: size mismatch in +=");
    m_ += other.m_;
    return *this;
  }

  RealSymMatrix& operator*=(double c) {
    m_ *= c;
    return *this;
  }

  friend bool operator==(const RealSymMatrix& a, const RealSymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Eigen::MatrixXd m_;
};

/// Float image of an integer matrix. Entries above 2^53 lose precision.
inline RealSymMatrix to_real(const IntSymMatrix& a) {
  RealSymMatrix r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i; j < a.size(); ++j) r.set(i, j, a(i, j).get_d());
  return r;
}

inline Eigen::VectorXd to_real(const IntVector& b) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) r(static_cast<Eigen::Index>(i)) = b[i].get_d();
  return r;
}

/// Integer image of a float vector, or nothing if some entry is not an
/// exactly representable integer.
inline std::optional<IntVector> to_integer(const Eigen::VectorXd& b) {
  IntVector r;
  r.reserve(static_cast<std::size_t>(b.size()));
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const double v = b(i);
    if (!std::isfinite(v) || std::trunc(v) != v) return std::nullopt;
    r.emplace_back(v);
  }
  return r;
}

inline IntVector int_vector(std::initializer_list<long> v) {
  IntVector r;
  for (long x : v) r.emplace_back(x);
  return r;
}

/// Adjacency matrix of the complete graph K_n.
inline IntSymMatrix complete_graph(std::size_t n) {
  IntSymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a.set(i, j, 1);
  return a;
}

/// Adjacency matrix of the path P_n (vertices in order).
inline IntSymMatrix path_graph(std::size_t n) {
  IntSymMatrix a(n);
  for (std::size_t i = 0; i + 1 < n; ++i) a.set(i, i + 1, 1);
  return a;
}

inline IntSymMatrix int_identity(std::size_t n) {
  IntSymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) a.set(i, i, 1);
  return a;
}

inline IntSymMatrix int_diagonal(std::initializer_list<long> d) {
  IntSymMatrix a(d.size());
  std::size_t i = 0;
  for (long v : d) {
    a.set(i, i, v);
    ++i;
  }
  return a;
}

}  // namespace ctrllab
