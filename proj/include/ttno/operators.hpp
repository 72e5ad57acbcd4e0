// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_OPERATORS_HPP
#define TTNO_OPERATORS_HPP

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "ttno/common.hpp"

namespace ttno {

inline const std::string kIdentityLabel = "I";

/// Symbolic single-site operator.
///
/// Two operators are symbolically equal iff label and dimension agree; the
/// attached matrix (if any) and the scale never take part in comparisons.
/// `base` names the registry entry the numerics come from and `scale`
/// multiplies it; a folded coefficient therefore lives in both the derived
/// label and the scale.
class SiteOperator {
 public:
  SiteOperator() = default;

  SiteOperator(std::string label, int dim) : label_(std::move(label)), base_(label_), dim_(dim) {
    validate();
  }

  /// Operator carrying its own dense matrix.
  SiteOperator(std::string label, DenseMatrix matrix)
      : label_(std::move(label)), base_(label_), dim_(static_cast<int>(matrix.rows())),
        matrix_(std::move(matrix)) {
    if (matrix_->rows() != matrix_->cols()) throw ValidationError("operator matrix must be square");
    validate();
  }

  static SiteOperator identity(int dim) { return SiteOperator(kIdentityLabel, dim); }

  const std::string &label() const { return label_; }
  const std::string &base() const { return base_; }
  int dim() const { return dim_; }
  Complex scale() const { return scale_; }
  const std::optional<DenseMatrix> &matrix() const { return matrix_; }
  bool is_identity() const { return label_ == kIdentityLabel; }

  /// `c * this`, labelled "c*label".
  SiteOperator scaled(Complex c) const {
    SiteOperator out = *this;
    out.label_ = format_scalar(c) + "*" + label_;
    out.scale_ = scale_ * c;
    if (out.matrix_) *out.matrix_ *= c;
    return out;
  }

  friend bool operator==(const SiteOperator &x, const SiteOperator &y) {
    return x.dim_ == y.dim_ && x.label_ == y.label_;
  }
  friend auto operator<=>(const SiteOperator &x, const SiteOperator &y) {
    if (auto c = x.label_ <=> y.label_; c != 0) return c;
    return x.dim_ <=> y.dim_;
  }

 private:
  void validate() const {
    if (label_.empty()) throw ValidationError("operator label must not be empty");
    if (dim_ < 1) throw ValidationError("operator dimension must be >= 1");
    if (is_identity() && matrix_ && !matrix_->isIdentity(0.0))
      throw ValidationError("the reserved label I must carry the identity matrix");
  }

  std::string label_;
  std::string base_;
  int dim_ = 0;
  Complex scale_{1.0, 0.0};
  std::optional<DenseMatrix> matrix_;
};

namespace ops {

inline DenseMatrix identity(int d) { return DenseMatrix::Identity(d, d); }

inline DenseMatrix pauli_x() {
  DenseMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline DenseMatrix pauli_y() {
  DenseMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline DenseMatrix pauli_z() {
  DenseMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// Truncated bosonic annihilation operator on `d` levels.
inline DenseMatrix annihilation(int d) {
  DenseMatrix m = DenseMatrix::Zero(d, d);
  for (int n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return m;
}
inline DenseMatrix creation(int d) { return annihilation(d).adjoint(); }
inline DenseMatrix number(int d) {
  DenseMatrix m = DenseMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) m(n, n) = n;
  return m;
}

}  // namespace ops

/// Maps operator labels to dense matrices, per physical dimension.
///
/// Built-ins: I (any dim); X, Y, Z (dim 2); B, Bdag, N (any dim, truncated
/// bosons). Custom entries shadow built-ins.
class OperatorRegistry {
 public:
  void add(const std::string &label, DenseMatrix m) {
    if (label.empty()) throw ValidationError("operator label must not be empty");
    if (m.rows() != m.cols()) throw ValidationError("operator matrix must be square");
    int d = static_cast<int>(m.rows());
    if (label == kIdentityLabel && !m.isIdentity(0.0))
      throw ValidationError("the reserved label I must carry the identity matrix");
    custom_[{label, d}] = std::move(m);
  }

  bool contains(const std::string &label, int dim) const {
    return custom_.count({label, dim}) > 0 || builtin(label, dim).has_value();
  }

  DenseMatrix get(const std::string &label, int dim) const {
    if (auto it = custom_.find({label, dim}); it != custom_.end()) return it->second;
    if (auto m = builtin(label, dim)) return *m;
    throw UnknownLabelError("no matrix registered for label '" + label + "' with dimension " +
                            std::to_string(dim));
  }

  /// Dense matrix of a (possibly scaled) site operator.
  DenseMatrix resolve(const SiteOperator &op) const {
    if (op.matrix()) return *op.matrix();
    return op.scale() * get(op.base(), op.dim());
  }

  const std::map<std::pair<std::string, int>, DenseMatrix> &custom() const { return custom_; }

 private:
  static std::optional<DenseMatrix> builtin(const std::string &label, int d) {
    if (label == kIdentityLabel) return ops::identity(d);
    if (d == 2) {
      if (label == "X") return ops::pauli_x();
      if (label == "Y") return ops::pauli_y();
      if (label == "Z") return ops::pauli_z();
    }
    if (label == "B") return ops::annihilation(d);
    if (label == "Bdag") return ops::creation(d);
    if (label == "N") return ops::number(d);
    return std::nullopt;
  }

  std::map<std::pair<std::string, int>, DenseMatrix> custom_;
};

}  // namespace ttno

#endif  // TTNO_OPERATORS_HPP
