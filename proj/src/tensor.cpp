#include "ignet/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace ignet {
namespace {

std::array<Index, Shape::kMaxRank> row_major_strides(const Shape& s) {
  std::array<Index, Shape::kMaxRank> st{};
  Index acc = 1;
  for (Index i = s.rank() - 1; i >= 0; --i) {
    st[static_cast<size_t>(i)] = acc;
    acc *= s[i];
  }
  return st;
}

void check_same_tape_shapes(const Shape& a, const Shape& b, const char* op) {
  if (a != b) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.str() + " vs " +
                     b.str());
  }
}

}  // namespace

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
  if (rank() > kMaxRank) {
    throw ShapeError("rank " + std::to_string(rank()) + " exceeds maximum " +
                     std::to_string(kMaxRank));
  }
  for (Index d : dims_) {
    if (d < 0) throw ShapeError("negative dimension in " + str());
  }
}

Index Shape::numel() const {
  Index n = 1;
  for (Index d : dims_) n *= d;
  return n;
}

std::string Shape::str() const {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < dims_.size(); ++i) {
    if (i) os << ',';
    os << dims_[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, std::vector<double> values) : shape_(std::move(shape)) {
  if (static_cast<Index>(values.size()) != shape_.numel()) {
    throw ShapeError("value count " + std::to_string(values.size()) +
                     " does not match shape " + shape_.str());
  }
  data_ = std::make_shared<const std::vector<double>>(std::move(values));
}

Tensor Tensor::zeros(const Shape& shape) {
  return Tensor(shape, std::vector<double>(static_cast<size_t>(shape.numel()), 0.0));
}

Tensor Tensor::full(const Shape& shape, double value) {
  return Tensor(shape, std::vector<double>(static_cast<size_t>(shape.numel()), value));
}

Tensor Tensor::uniform(const Shape& shape, double a, double b, Rng& rng) {
  std::vector<double> v(static_cast<size_t>(shape.numel()));
  for (double& x : v) x = rng.uniform(a, b);
  return Tensor(shape, std::move(v));
}

Tensor Tensor::normal(const Shape& shape, double mu, double sigma, Rng& rng) {
  std::vector<double> v(static_cast<size_t>(shape.numel()));
  for (double& x : v) x = rng.normal(mu, sigma);
  return Tensor(shape, std::move(v));
}

double Tensor::at(std::initializer_list<Index> idx) const {
  if (static_cast<Index>(idx.size()) != rank()) {
    throw ShapeError("index rank mismatch for " + shape_.str());
  }
  auto st = row_major_strides(shape_);
  Index flat = 0;
  Index axis = 0;
  for (Index i : idx) {
    if (i < 0 || i >= shape_[axis]) {
      throw ShapeError("index out of range on axis " + std::to_string(axis));
    }
    flat += i * st[static_cast<size_t>(axis)];
    ++axis;
  }
  return (*data_)[static_cast<size_t>(flat)];
}

double Tensor::item() const {
  if (numel() != 1) {
    throw ShapeError("item() on tensor with " + std::to_string(numel()) +
                     " elements");
  }
  return (*data_)[0];
}

bool Tensor::all_finite() const {
  for (double v : *data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Shape broadcast_shape(const Shape& a, const Shape& b) {
  Index rank = std::max(a.rank(), b.rank());
  std::vector<Index> out(static_cast<size_t>(rank));
  for (Index i = 0; i < rank; ++i) {
    Index da = i < a.rank() ? a[a.rank() - 1 - i] : 1;
    Index db = i < b.rank() ? b[b.rank() - 1 - i] : 1;
    Index d;
    if (da == db || db == 1) {
      d = da;
    } else if (da == 1) {
      d = db;
    } else {
      throw ShapeError("broadcast mismatch " + a.str() + " vs " + b.str());
    }
    out[static_cast<size_t>(rank - 1 - i)] = d;
  }
  return Shape(std::move(out));
}

namespace {

// Strides of `s` expanded to `out` with zero stride on stretched axes.
std::array<Index, Shape::kMaxRank> broadcast_strides(const Shape& s,
                                                     const Shape& out) {
  auto own = row_major_strides(s);
  std::array<Index, Shape::kMaxRank> st{};
  Index shift = out.rank() - s.rank();
  for (Index i = 0; i < out.rank(); ++i) {
    if (i < shift) {
      st[static_cast<size_t>(i)] = 0;
    } else {
      Index d = s[i - shift];
      st[static_cast<size_t>(i)] = (d == 1 && out[i] != 1)
                                       ? 0
                                       : own[static_cast<size_t>(i - shift)];
    }
  }
  return st;
}

template <typename F>
Tensor binary_op(const Tensor& a, const Tensor& b, F f, const char* name) {
  if (a.shape() == b.shape()) {
    std::vector<double> out(static_cast<size_t>(a.numel()));
    const double* pa = a.raw();
    const double* pb = b.raw();
    for (size_t i = 0; i < out.size(); ++i) out[i] = f(pa[i], pb[i]);
    return Tensor(a.shape(), std::move(out));
  }
  Shape os = broadcast_shape(a.shape(), b.shape());
  auto sa = broadcast_strides(a.shape(), os);
  auto sb = broadcast_strides(b.shape(), os);
  Index rank = os.rank();
  std::vector<double> out(static_cast<size_t>(os.numel()));
  std::array<Index, Shape::kMaxRank> idx{};
  const double* pa = a.raw();
  const double* pb = b.raw();
  Index fa = 0;
  Index fb = 0;
  for (size_t o = 0; o < out.size(); ++o) {
    out[o] = f(pa[fa], pb[fb]);
    for (Index ax = rank - 1; ax >= 0; --ax) {
      size_t u = static_cast<size_t>(ax);
      ++idx[u];
      fa += sa[u];
      fb += sb[u];
      if (idx[u] < os[ax]) break;
      fa -= sa[u] * os[ax];
      fb -= sb[u] * os[ax];
      idx[u] = 0;
    }
  }
  (void)name;
  return Tensor(os, std::move(out));
}

template <typename F>
Tensor unary_op(const Tensor& a, F f) {
  std::vector<double> out(static_cast<size_t>(a.numel()));
  const double* pa = a.raw();
  for (size_t i = 0; i < out.size(); ++i) out[i] = f(pa[i]);
  return Tensor(a.shape(), std::move(out));
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return binary_op(a, b, [](double x, double y) { return x + y; }, "add");
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary_op(a, b, [](double x, double y) { return x - y; }, "sub");
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary_op(a, b, [](double x, double y) { return x * y; }, "mul");
}

Tensor div(const Tensor& a, const Tensor& b) {
  for (double v : b.data()) {
    if (v == 0.0) throw NumericError("div: zero in denominator");
  }
  return binary_op(a, b, [](double x, double y) { return x / y; }, "div");
}

Tensor neg(const Tensor& a) {
  return unary_op(a, [](double x) { return -x; });
}

Tensor relu(const Tensor& a) {
  return unary_op(a, [](double x) { return x > 0.0 ? x : 0.0; });
}

double sigmoid_scalar(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor sigmoid(const Tensor& a) { return unary_op(a, sigmoid_scalar); }

Tensor exp(const Tensor& a) {
  return unary_op(a, [](double x) { return std::exp(x); });
}

Tensor log(const Tensor& a) {
  for (double v : a.data()) {
    if (v <= 0.0) throw NumericError("log: non-positive input");
  }
  return unary_op(a, [](double x) { return std::log(x); });
}

Tensor sqrt(const Tensor& a) {
  for (double v : a.data()) {
    if (v < 0.0) throw NumericError("sqrt: negative input");
  }
  return unary_op(a, [](double x) { return std::sqrt(x); });
}

Tensor recip(const Tensor& a) {
  for (double v : a.data()) {
    if (v == 0.0) throw NumericError("recip: zero input");
  }
  return unary_op(a, [](double x) { return 1.0 / x; });
}

Tensor clamp_min(const Tensor& a, double lo) {
  return unary_op(a, [lo](double x) { return x < lo ? lo : x; });
}

Tensor scale(const Tensor& a, double k) {
  return unary_op(a, [k](double x) { return k * x; });
}

Tensor add_scalar(const Tensor& a, double k) {
  return unary_op(a, [k](double x) { return x + k; });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw ShapeError("matmul: expected rank-2 inputs, got " + a.shape().str() +
                     " and " + b.shape().str());
  }
  Index m = a.dim(0), k = a.dim(1), k2 = b.dim(0), n = b.dim(1);
  if (k != k2) {
    throw ShapeError("matmul: inner dims differ, " + a.shape().str() + " vs " +
                     b.shape().str());
  }
  std::vector<double> out(static_cast<size_t>(m * n), 0.0);
  const double* pa = a.raw();
  const double* pb = b.raw();
  // i-k-j order: the j loop is a contiguous axpy over the output row.
  for (Index i = 0; i < m; ++i) {
    double* orow = out.data() + i * n;
    const double* arow = pa + i * k;
    for (Index p = 0; p < k; ++p) {
      double av = arow[p];
      const double* brow = pb + p * n;
      for (Index j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
  return Tensor(Shape{m, n}, std::move(out));
}

Tensor transpose2d(const Tensor& a) {
  if (a.rank() != 2) throw ShapeError("transpose2d: expected rank 2");
  Index m = a.dim(0), n = a.dim(1);
  std::vector<double> out(static_cast<size_t>(m * n));
  const double* pa = a.raw();
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) out[static_cast<size_t>(j * m + i)] = pa[i * n + j];
  }
  return Tensor(Shape{n, m}, std::move(out));
}

namespace {

std::vector<bool> axis_mask(const Shape& s, std::span<const Index> axes) {
  std::vector<bool> reduce_axis(static_cast<size_t>(s.rank()), false);
  for (Index ax : axes) {
    if (ax < 0 || ax >= s.rank()) {
      throw ShapeError("reduce: axis " + std::to_string(ax) +
                       " out of range for " + s.str());
    }
    reduce_axis[static_cast<size_t>(ax)] = true;
  }
  return reduce_axis;
}

Shape reduced_shape(const Shape& s, const std::vector<bool>& mask, bool keepdims) {
  std::vector<Index> dims;
  for (Index i = 0; i < s.rank(); ++i) {
    if (mask[static_cast<size_t>(i)]) {
      if (keepdims) dims.push_back(1);
    } else {
      dims.push_back(s[i]);
    }
  }
  return Shape(std::move(dims));
}

}  // namespace

Tensor reduce(Reduce op, const Tensor& a, std::span<const Index> axes,
              bool keepdims) {
  const Shape& s = a.shape();
  auto mask = axis_mask(s, axes);
  Shape os = reduced_shape(s, mask, keepdims);

  // Keepdims layout of the output, used for index arithmetic.
  std::vector<Index> kd;
  for (Index i = 0; i < s.rank(); ++i) {
    kd.push_back(mask[static_cast<size_t>(i)] ? 1 : s[i]);
  }
  Shape kshape(kd);
  auto kstrides = row_major_strides(kshape);

  Index count = 1;
  for (Index i = 0; i < s.rank(); ++i) {
    if (mask[static_cast<size_t>(i)]) count *= s[i];
  }
  if (op == Reduce::kMax && count == 0) {
    throw ShapeError("reduce max over empty axes");
  }

  double init = op == Reduce::kMax ? -std::numeric_limits<double>::infinity() : 0.0;
  std::vector<double> out(static_cast<size_t>(os.numel()), init);

  // Row-major sweep of the input; accumulation order per output slot is the
  // row-major order of its contributing elements (fixed, deterministic).
  const double* pa = a.raw();
  std::array<Index, Shape::kMaxRank> idx{};
  Index rank = s.rank();
  Index kflat = 0;
  for (Index flat = 0; flat < a.numel(); ++flat) {
    if (op == Reduce::kMax) {
      if (pa[flat] > out[static_cast<size_t>(kflat)]) {
        out[static_cast<size_t>(kflat)] = pa[flat];
      }
    } else {
      out[static_cast<size_t>(kflat)] += pa[flat];
    }
    for (Index ax = rank - 1; ax >= 0; --ax) {
      size_t u = static_cast<size_t>(ax);
      ++idx[u];
      if (kshape[ax] != 1) kflat += kstrides[u];
      if (idx[u] < s[ax]) break;
      if (kshape[ax] != 1) kflat -= kstrides[u] * s[ax];
      idx[u] = 0;
    }
  }
  if (op == Reduce::kMean) {
    if (count == 0) throw ShapeError("reduce mean over empty axes");
    for (double& v : out) v /= static_cast<double>(count);
  }
  return Tensor(os, std::move(out));
}

Tensor concat(std::span<const Tensor> parts, Index axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  const Shape& first = parts[0].shape();
  if (axis < 0 || axis >= first.rank()) {
    throw ShapeError("concat: axis out of range");
  }
  Index axis_total = 0;
  for (const Tensor& t : parts) {
    if (t.rank() != first.rank()) throw ShapeError("concat: rank mismatch");
    for (Index i = 0; i < first.rank(); ++i) {
      if (i != axis && t.dim(i) != first[i]) {
        throw ShapeError("concat: off-axis shape mismatch " + t.shape().str() +
                         " vs " + first.str());
      }
    }
    axis_total += t.dim(axis);
  }
  std::vector<Index> od = first.dims();
  od[static_cast<size_t>(axis)] = axis_total;
  Shape os(od);

  Index outer = 1;
  for (Index i = 0; i < axis; ++i) outer *= first[i];
  Index inner = 1;
  for (Index i = axis + 1; i < first.rank(); ++i) inner *= first[i];

  std::vector<double> out(static_cast<size_t>(os.numel()));
  Index out_row = axis_total * inner;
  Index offset = 0;
  for (const Tensor& t : parts) {
    Index block = t.dim(axis) * inner;
    const double* src = t.raw();
    for (Index o = 0; o < outer; ++o) {
      std::copy(src + o * block, src + (o + 1) * block,
                out.begin() + o * out_row + offset);
    }
    offset += block;
  }
  return Tensor(os, std::move(out));
}

Tensor slice(const Tensor& a, Index axis, Index start, Index len) {
  const Shape& s = a.shape();
  if (axis < 0 || axis >= s.rank()) throw ShapeError("slice: axis out of range");
  if (start < 0 || len < 0 || start + len > s[axis]) {
    throw ShapeError("slice: range [" + std::to_string(start) + "," +
                     std::to_string(start + len) + ") out of bounds for axis size " +
                     std::to_string(s[axis]));
  }
  std::vector<Index> od = s.dims();
  od[static_cast<size_t>(axis)] = len;
  Shape os(od);

  Index outer = 1;
  for (Index i = 0; i < axis; ++i) outer *= s[i];
  Index inner = 1;
  for (Index i = axis + 1; i < s.rank(); ++i) inner *= s[i];

  std::vector<double> out(static_cast<size_t>(os.numel()));
  const double* src = a.raw();
  Index in_row = s[axis] * inner;
  Index block = len * inner;
  for (Index o = 0; o < outer; ++o) {
    const double* p = src + o * in_row + start * inner;
    std::copy(p, p + block, out.begin() + o * block);
  }
  return Tensor(os, std::move(out));
}

Tensor reshape(const Tensor& a, const Shape& shape) {
  if (shape.numel() != a.numel()) {
    throw ShapeError("reshape: element count mismatch " + a.shape().str() +
                     " -> " + shape.str());
  }
  return Tensor(shape, std::vector<double>(a.data().begin(), a.data().end()));
}

Tensor broadcast_to(const Tensor& a, const Shape& shape) {
  Shape bs = broadcast_shape(a.shape(), shape);
  if (bs != shape) {
    throw ShapeError("broadcast_to: cannot broadcast " + a.shape().str() +
                     " to " + shape.str());
  }
  Tensor ones = Tensor::full(shape, 1.0);
  return mul(a, ones);
}

Tensor reduce_to_shape(const Tensor& grad, const Shape& target) {
  if (grad.shape() == target) return grad;
  check_same_tape_shapes(broadcast_shape(grad.shape(), target), grad.shape(),
                         "reduce_to_shape");
  Tensor g = grad;
  // Sum away leading extra axes.
  while (g.rank() > target.rank()) {
    Index ax0 = 0;
    g = reduce(Reduce::kSum, g, std::span<const Index>(&ax0, 1), false);
  }
  // Sum over stretched axes, keeping dims.
  std::vector<Index> axes;
  for (Index i = 0; i < target.rank(); ++i) {
    if (target[i] == 1 && g.dim(i) != 1) axes.push_back(i);
  }
  if (!axes.empty()) g = reduce(Reduce::kSum, g, axes, true);
  return g;
}

}  // namespace ignet
