#pragma once

// Naive reference implementations used as independent oracles. All of these
// are deliberately written as plain index loops with no shared code paths
// with the library implementations they check.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ignet/rng.hpp"
#include "ignet/tensor.hpp"

namespace oracle {

using ignet::Index;
using ignet::Shape;
using ignet::Tensor;

inline double rel_err(double got, double want) {
  double denom = std::max({1.0, std::fabs(got), std::fabs(want)});
  return std::fabs(got - want) / denom;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  REQUIRE(a.shape() == b.shape());
  double m = 0.0;
  for (Index i = 0; i < a.numel(); ++i) {
    m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  }
  return m;
}

inline double max_rel_err(const Tensor& got, const Tensor& want) {
  REQUIRE(got.shape() == want.shape());
  double m = 0.0;
  for (Index i = 0; i < got.numel(); ++i) {
    m = std::max(m, rel_err(got.data()[i], want.data()[i]));
  }
  return m;
}

// Resolve a flat row-major index of `out_shape` to the flat index in `s`
// under trailing-alignment broadcast.
inline Index broadcast_source_index(const Shape& s, const Shape& out_shape,
                                    Index out_flat) {
  std::vector<Index> out_idx(out_shape.rank());
  for (Index ax = out_shape.rank() - 1; ax >= 0; --ax) {
    out_idx[ax] = out_flat % out_shape[ax];
    out_flat /= out_shape[ax];
  }
  Index shift = out_shape.rank() - s.rank();
  Index flat = 0;
  for (Index ax = 0; ax < s.rank(); ++ax) {
    Index i = out_idx[ax + shift];
    if (s[ax] == 1) i = 0;
    flat = flat * s[ax] + i;
  }
  return flat;
}

template <typename F>
Tensor broadcast_binary(const Tensor& a, const Tensor& b, F f) {
  Shape os = ignet::broadcast_shape(a.shape(), b.shape());
  std::vector<double> out(os.numel());
  for (Index o = 0; o < os.numel(); ++o) {
    double x = a.data()[broadcast_source_index(a.shape(), os, o)];
    double y = b.data()[broadcast_source_index(b.shape(), os, o)];
    out[o] = f(x, y);
  }
  return Tensor(os, std::move(out));
}

inline Tensor matmul(const Tensor& a, const Tensor& b) {
  Index m = a.dim(0), k = a.dim(1), n = b.dim(1);
  std::vector<double> out(m * n, 0.0);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      double acc = 0.0;
      for (Index p = 0; p < k; ++p) {
        acc += a.data()[i * k + p] * b.data()[p * n + j];
      }
      out[i * n + j] = acc;
    }
  }
  return Tensor(Shape{m, n}, std::move(out));
}

// Mean over spatial dims of a [N,C,H,W] tensor, explicit accumulate/divide.
inline Tensor mean_hw(const Tensor& x) {
  Index n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  std::vector<double> out(n * c);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < c; ++j) {
      double acc = 0.0;
      for (Index y = 0; y < h; ++y) {
        for (Index z = 0; z < w; ++z) {
          acc += x.data()[((i * c + j) * h + y) * w + z];
        }
      }
      out[i * c + j] = acc / static_cast<double>(h * w);
    }
  }
  return Tensor(Shape{n, c}, std::move(out));
}

// Direct sliding-window cross-correlation, zero padding.
// x: [N,C,H,W], k: [OC,C,KH,KW] -> [N,OC,OH,OW]
inline Tensor conv2d(const Tensor& x, const Tensor& k, const double* bias,
                     Index sh, Index sw, Index ph, Index pw) {
  Index n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  Index oc = k.dim(0), kh = k.dim(2), kw = k.dim(3);
  Index oh = (h + 2 * ph - kh) / sh + 1;
  Index ow = (w + 2 * pw - kw) / sw + 1;
  std::vector<double> out(n * oc * oh * ow, 0.0);
  for (Index in = 0; in < n; ++in) {
    for (Index io = 0; io < oc; ++io) {
      for (Index y = 0; y < oh; ++y) {
        for (Index z = 0; z < ow; ++z) {
          double acc = bias ? bias[io] : 0.0;
          for (Index ic = 0; ic < c; ++ic) {
            for (Index ky = 0; ky < kh; ++ky) {
              for (Index kz = 0; kz < kw; ++kz) {
                Index iy = y * sh - ph + ky;
                Index iz = z * sw - pw + kz;
                if (iy < 0 || iy >= h || iz < 0 || iz >= w) continue;
                acc += x.data()[((in * c + ic) * h + iy) * w + iz] *
                       k.data()[((io * c + ic) * kh + ky) * kw + kz];
              }
            }
          }
          out[((in * oc + io) * oh + y) * ow + z] = acc;
        }
      }
    }
  }
  return Tensor(Shape{n, oc, oh, ow}, std::move(out));
}

// Top-k error by exhaustive sort; ties broken by lower index.
inline double topk_error(const Tensor& logits, const std::vector<int>& labels,
                         int k) {
  Index n = logits.dim(0), classes = logits.dim(1);
  Index wrong = 0;
  for (Index i = 0; i < n; ++i) {
    std::vector<Index> order(classes);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return logits.data()[i * classes + a] > logits.data()[i * classes + b];
    });
    bool hit = false;
    for (int j = 0; j < k; ++j) {
      if (order[j] == labels[i]) hit = true;
    }
    if (!hit) ++wrong;
  }
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(n);
}

inline Tensor random_tensor(const Shape& s, ignet::Rng& rng, double lo = -1.0,
                            double hi = 1.0) {
  return Tensor::uniform(s, lo, hi, rng);
}

}  // namespace oracle
