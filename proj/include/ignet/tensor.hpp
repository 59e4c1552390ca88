#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ignet/error.hpp"
#include "ignet/rng.hpp"

namespace ignet {

using Index = std::int64_t;

// Dimensions of a dense row-major array. Rank 0 denotes a scalar (one
// element); ranks above 4 are rejected.
class Shape {
 public:
  static constexpr Index kMaxRank = 4;

  Shape() = default;
  Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}
  explicit Shape(std::vector<Index> dims);

  Index rank() const { return static_cast<Index>(dims_.size()); }
  Index operator[](Index axis) const { return dims_[static_cast<size_t>(axis)]; }
  const std::vector<Index>& dims() const { return dims_; }
  Index numel() const;

  bool operator==(const Shape& other) const { return dims_ == other.dims_; }
  bool operator!=(const Shape& other) const { return dims_ != other.dims_; }

  std::string str() const;

 private:
  std::vector<Index> dims_;
};

// Dense 64-bit-float array with row-major layout (last dim fastest).
// Immutable after construction; copies share the underlying buffer.
class Tensor {
 public:
  Tensor() : Tensor(Shape{}, std::vector<double>{0.0}) {}
  Tensor(Shape shape, std::vector<double> values);

  static Tensor zeros(const Shape& shape);
  static Tensor full(const Shape& shape, double value);
  static Tensor from(const Shape& shape, std::vector<double> values) {
    return Tensor(shape, std::move(values));
  }
  static Tensor scalar(double v) { return Tensor(Shape{}, {v}); }
  static Tensor uniform(const Shape& shape, double a, double b, Rng& rng);
  static Tensor normal(const Shape& shape, double mu, double sigma, Rng& rng);

  const Shape& shape() const { return shape_; }
  Index rank() const { return shape_.rank(); }
  Index dim(Index axis) const { return shape_[axis]; }
  Index numel() const { return static_cast<Index>(data_->size()); }

  std::span<const double> data() const { return *data_; }
  const double* raw() const { return data_->data(); }

  double at(std::initializer_list<Index> idx) const;
  double item() const;

  bool same_data(const Tensor& other) const { return data_ == other.data_; }
  bool all_finite() const;

 private:
  Shape shape_;
  std::shared_ptr<const std::vector<double>> data_;
};

enum class Elementwise {
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kRelu,
  kSigmoid,
  kExp,
  kLog,
  kSqrt,
  kRecip,
};

enum class Reduce { kSum, kMean, kMax };

// --- elementwise -----------------------------------------------------------
// Binary ops broadcast with trailing alignment: shapes are right-aligned and
// a dim of size 1 stretches to match.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
// Strict: any zero in the denominator is an error.
Tensor div(const Tensor& a, const Tensor& b);

Tensor neg(const Tensor& a);
Tensor relu(const Tensor& a);
// Numerically stable two-branch sigmoid; saturates to exactly 0/1 at the
// extremes of double range.
Tensor sigmoid(const Tensor& a);
Tensor exp(const Tensor& a);
// Strict: rejects non-positive inputs.
Tensor log(const Tensor& a);
Tensor sqrt(const Tensor& a);
// Strict: rejects zeros.
Tensor recip(const Tensor& a);
Tensor clamp_min(const Tensor& a, double lo);

Tensor scale(const Tensor& a, double k);
Tensor add_scalar(const Tensor& a, double k);

double sigmoid_scalar(double x);

// --- structure -------------------------------------------------------------
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose2d(const Tensor& a);
Tensor reduce(Reduce op, const Tensor& a, std::span<const Index> axes,
              bool keepdims);
Tensor concat(std::span<const Tensor> parts, Index axis);
Tensor slice(const Tensor& a, Index axis, Index start, Index len);
Tensor reshape(const Tensor& a, const Shape& shape);
Tensor broadcast_to(const Tensor& a, const Shape& shape);

// Shape of `a op b` under trailing-alignment broadcast; throws on mismatch.
Shape broadcast_shape(const Shape& a, const Shape& b);

// Sums `grad` down to `target`: the adjoint of broadcast_to. Used by the
// autodiff backward rules of broadcasting ops.
Tensor reduce_to_shape(const Tensor& grad, const Shape& target);

}  // namespace ignet
