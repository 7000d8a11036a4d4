// Copyright 2026, The radar-moseve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "moseve/autodiff/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "moseve/errors.hpp"

namespace moseve::ad {

namespace {

// Tensor buffers are 64-byte aligned, so the maps below always take the same
// vectorized path and the rounding never depends on heap placement.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat, Eigen::Aligned64>;
using MutMap = Eigen::Map<RowMat, Eigen::Aligned64>;

void require_2d(const Tensor& t, const char* op) {
  if (t.rank() != 2) throw DimensionError(std::string(op) + ": expected 2-D tensor, got " + shape_string(t.shape()));
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
}

bool wants(const TensorNode& self, std::size_t parent) { return self.parents[parent]->requires_grad; }

template <typename Fwd, typename Dfdx>
Tensor unary(const Tensor& x, Fwd fwd, Dfdx dfdx) {
  Buffer out(x.numel());
  auto in = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(in[i]);
  return Tensor::make_result(x.shape(), std::move(out), {x}, [dfdx](TensorNode& self) {
    auto& p = *self.parents[0];
    for (std::size_t i = 0; i < p.value.size(); ++i) p.grad[i] += self.grad[i] * dfdx(p.value[i], self.value[i]);
  });
}

}  // namespace

Tensor affine(const Tensor& input, const Tensor& weight, const Tensor& bias) {
  require_2d(input, "affine");
  require_2d(weight, "affine");
  const std::size_t n = input.dim(0), din = input.dim(1), dout = weight.dim(1);
  if (weight.dim(0) != din || bias.numel() != dout) {
    throw DimensionError("affine: input " + shape_string(input.shape()) + ", weight " + shape_string(weight.shape()) +
                         ", bias " + shape_string(bias.shape()) + " do not compose");
  }
  Buffer out(n * dout);
  MutMap o(out.data(), n, dout);
  o.noalias() = ConstMap(input.data().data(), n, din) * ConstMap(weight.data().data(), din, dout);
  o.rowwise() += Eigen::Map<const Eigen::RowVectorXd, Eigen::Aligned64>(bias.data().data(), dout);

  return Tensor::make_result({n, dout}, std::move(out), {input, weight, bias}, [n, din, dout](TensorNode& self) {
    const ConstMap g(self.grad.data(), n, dout);
    auto& in = *self.parents[0];
    auto& wt = *self.parents[1];
    auto& bs = *self.parents[2];
    if (in.requires_grad) MutMap(in.grad.data(), n, din).noalias() += g * ConstMap(wt.value.data(), din, dout).transpose();
    if (wt.requires_grad) MutMap(wt.grad.data(), din, dout).noalias() += ConstMap(in.value.data(), n, din).transpose() * g;
    if (bs.requires_grad) {
      Eigen::Map<Eigen::RowVectorXd, Eigen::Aligned64>(bs.grad.data(), dout) += g.colwise().sum();
    }
  });
}

Tensor relu(const Tensor& input) {
  return unary(
      input, [](double v) { return v > 0.0 ? v : 0.0; }, [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor abs(const Tensor& input) {
  return unary(
      input, [](double v) { return std::fabs(v); },
      [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Tensor square(const Tensor& input) {
  return unary(
      input, [](double v) { return v * v; }, [](double x, double) { return 2.0 * x; });
}

Tensor scale(const Tensor& a, double factor) {
  return unary(
      a, [factor](double v) { return v * factor; }, [factor](double, double) { return factor; });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Buffer out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [](TensorNode& self) {
    for (std::size_t k = 0; k < 2; ++k) {
      if (!wants(self, k)) continue;
      auto& g = self.parents[k]->grad;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  Buffer out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [](TensorNode& self) {
    if (wants(self, 0)) {
      auto& g = self.parents[0]->grad;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
    if (wants(self, 1)) {
      auto& g = self.parents[1]->grad;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= self.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Buffer out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return Tensor::make_result(a.shape(), std::move(out), {a, b}, [](TensorNode& self) {
    auto& pa = *self.parents[0];
    auto& pb = *self.parents[1];
    if (pa.requires_grad) {
      for (std::size_t i = 0; i < pa.grad.size(); ++i) pa.grad[i] += self.grad[i] * pb.value[i];
    }
    if (pb.requires_grad) {
      for (std::size_t i = 0; i < pb.grad.size(); ++i) pb.grad[i] += self.grad[i] * pa.value[i];
    }
  });
}

Tensor scale_by(const Tensor& a, const Tensor& s) {
  if (s.numel() != 1) throw DimensionError("scale_by: factor must hold one element, got " + shape_string(s.shape()));
  const double f = s[0];
  Buffer out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * f;
  return Tensor::make_result(a.shape(), std::move(out), {a, s}, [](TensorNode& self) {
    auto& pa = *self.parents[0];
    auto& ps = *self.parents[1];
    if (pa.requires_grad) {
      for (std::size_t i = 0; i < pa.grad.size(); ++i) pa.grad[i] += self.grad[i] * ps.value[0];
    }
    if (ps.requires_grad) {
      double acc = 0.0;
      for (std::size_t i = 0; i < pa.value.size(); ++i) acc += self.grad[i] * pa.value[i];
      ps.grad[0] += acc;
    }
  });
}

Tensor scale_rows(const Tensor& a, const Tensor& s) {
  const std::size_t rows = a.rows(), cols = a.cols();
  if (s.numel() != rows) {
    throw DimensionError("scale_rows: " + std::to_string(s.numel()) + " factors for " + std::to_string(rows) + " rows");
  }
  Buffer out(a.numel());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] = a[r * cols + c] * s[r];
  }
  return Tensor::make_result(a.shape(), std::move(out), {a, s}, [rows, cols](TensorNode& self) {
    auto& pa = *self.parents[0];
    auto& ps = *self.parents[1];
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        const std::size_t i = r * cols + c;
        if (pa.requires_grad) pa.grad[i] += self.grad[i] * ps.value[r];
        acc += self.grad[i] * pa.value[i];
      }
      if (ps.requires_grad) ps.grad[r] += acc;
    }
  });
}

Tensor sum(const Tensor& a) {
  double acc = 0.0;
  for (double v : a.data()) acc += v;
  return Tensor::make_result({1}, Buffer{acc}, {a}, [](TensorNode& self) {
    auto& g = self.parents[0]->grad;
    for (double& v : g) v += self.grad[0];
  });
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.numel())); }

Tensor mean_rows(const Tensor& a) {
  require_2d(a, "mean_rows");
  const std::size_t rows = a.dim(0), cols = a.dim(1);
  Buffer out(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[c] += a[r * cols + c];
  }
  const double inv = 1.0 / static_cast<double>(rows);
  for (double& v : out) v *= inv;
  return Tensor::make_result({1, cols}, std::move(out), {a}, [rows, cols, inv](TensorNode& self) {
    auto& g = self.parents[0]->grad;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) g[r * cols + c] += self.grad[c] * inv;
    }
  });
}

Tensor softmax_lastdim(const Tensor& input) {
  const std::size_t width = input.shape().back();
  const std::size_t rows = input.numel() / width;
  Buffer out(input.numel());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = input.data().data() + r * width;
    double* y = out.data() + r * width;
    const double mx = *std::max_element(x, x + width);
    double z = 0.0;
    for (std::size_t c = 0; c < width; ++c) z += (y[c] = std::exp(x[c] - mx));
    for (std::size_t c = 0; c < width; ++c) y[c] /= z;
  }
  return Tensor::make_result(input.shape(), std::move(out), {input}, [rows, width](TensorNode& self) {
    auto& g = self.parents[0]->grad;
    for (std::size_t r = 0; r < rows; ++r) {
      const double* y = self.value.data() + r * width;
      const double* gy = self.grad.data() + r * width;
      double dot = 0.0;
      for (std::size_t c = 0; c < width; ++c) dot += gy[c] * y[c];
      for (std::size_t c = 0; c < width; ++c) g[r * width + c] += y[c] * (gy[c] - dot);
    }
  });
}

Tensor log_softmax_lastdim(const Tensor& input) {
  const std::size_t width = input.shape().back();
  const std::size_t rows = input.numel() / width;
  Buffer out(input.numel());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = input.data().data() + r * width;
    double* y = out.data() + r * width;
    const double mx = *std::max_element(x, x + width);
    double z = 0.0;
    for (std::size_t c = 0; c < width; ++c) z += std::exp(x[c] - mx);
    const double lse = mx + std::log(z);
    for (std::size_t c = 0; c < width; ++c) y[c] = x[c] - lse;
  }
  return Tensor::make_result(input.shape(), std::move(out), {input}, [rows, width](TensorNode& self) {
    auto& g = self.parents[0]->grad;
    for (std::size_t r = 0; r < rows; ++r) {
      const double* y = self.value.data() + r * width;
      const double* gy = self.grad.data() + r * width;
      double total = 0.0;
      for (std::size_t c = 0; c < width; ++c) total += gy[c];
      for (std::size_t c = 0; c < width; ++c) g[r * width + c] += gy[c] - std::exp(y[c]) * total;
    }
  });
}

Tensor softmax_groups(const Tensor& input, std::size_t group) {
  require_2d(input, "softmax_groups");
  const std::size_t rows = input.dim(0), cols = input.dim(1);
  if (group == 0 || rows % group != 0) {
    throw DimensionError("softmax_groups: " + std::to_string(rows) + " rows not divisible into groups of " +
                         std::to_string(group));
  }
  const std::size_t groups = rows / group;
  Buffer out(input.numel());
  const double* x = input.data().data();
  std::vector<double> mx(cols), z(cols);
  for (std::size_t gi = 0; gi < groups; ++gi) {
    const std::size_t base = gi * group * cols;
    std::fill(mx.begin(), mx.end(), -std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < group; ++k) {
      for (std::size_t c = 0; c < cols; ++c) mx[c] = std::max(mx[c], x[base + k * cols + c]);
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t k = 0; k < group; ++k) {
      for (std::size_t c = 0; c < cols; ++c) {
        const std::size_t i = base + k * cols + c;
        z[c] += (out[i] = std::exp(x[i] - mx[c]));
      }
    }
    for (std::size_t k = 0; k < group; ++k) {
      for (std::size_t c = 0; c < cols; ++c) out[base + k * cols + c] /= z[c];
    }
  }
  return Tensor::make_result(input.shape(), std::move(out), {input}, [groups, group, cols](TensorNode& self) {
    auto& g = self.parents[0]->grad;
    std::vector<double> dot(cols);
    for (std::size_t gi = 0; gi < groups; ++gi) {
      const std::size_t base = gi * group * cols;
      std::fill(dot.begin(), dot.end(), 0.0);
      for (std::size_t k = 0; k < group; ++k) {
        for (std::size_t c = 0; c < cols; ++c) {
          const std::size_t i = base + k * cols + c;
          dot[c] += self.grad[i] * self.value[i];
        }
      }
      for (std::size_t k = 0; k < group; ++k) {
        for (std::size_t c = 0; c < cols; ++c) {
          const std::size_t i = base + k * cols + c;
          g[i] += self.value[i] * (self.grad[i] - dot[c]);
        }
      }
    }
  });
}

Tensor group_sum(const Tensor& input, std::size_t group) {
  require_2d(input, "group_sum");
  const std::size_t rows = input.dim(0), cols = input.dim(1);
  if (group == 0 || rows % group != 0) {
    throw DimensionError("group_sum: " + std::to_string(rows) + " rows not divisible into groups of " +
                         std::to_string(group));
  }
  const std::size_t groups = rows / group;
  Buffer out(groups * cols, 0.0);
  const double* x = input.data().data();
  for (std::size_t gi = 0; gi < groups; ++gi) {
    for (std::size_t k = 0; k < group; ++k) {
      const double* row = x + (gi * group + k) * cols;
      for (std::size_t c = 0; c < cols; ++c) out[gi * cols + c] += row[c];
    }
  }
  return Tensor::make_result({groups, cols}, std::move(out), {input}, [groups, group, cols](TensorNode& self) {
    auto& g = self.parents[0]->grad;
    for (std::size_t gi = 0; gi < groups; ++gi) {
      for (std::size_t k = 0; k < group; ++k) {
        double* row = g.data() + (gi * group + k) * cols;
        for (std::size_t c = 0; c < cols; ++c) row[c] += self.grad[gi * cols + c];
      }
    }
  });
}

Tensor gather_rows(const Tensor& source, std::span<const std::size_t> indices) {
  require_2d(source, "gather_rows");
  const std::size_t n = source.dim(0), d = source.dim(1);
  if (indices.empty()) throw DimensionError("gather_rows: empty index list");
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  Buffer out(idx.size() * d);
  const double* src = source.data().data();
  for (std::size_t m = 0; m < idx.size(); ++m) {
    if (idx[m] >= n) {
      throw IndexError("gather_rows: index " + std::to_string(idx[m]) + " out of range for " + std::to_string(n) +
                       " rows");
    }
    std::copy_n(src + idx[m] * d, d, out.data() + m * d);
  }
  const std::size_t m_rows = idx.size();
  return Tensor::make_result({m_rows, d}, std::move(out), {source}, [idx = std::move(idx), d](TensorNode& self) {
    auto& g = self.parents[0]->grad;
    for (std::size_t m = 0; m < idx.size(); ++m) {
      double* dst = g.data() + idx[m] * d;
      const double* gm = self.grad.data() + m * d;
      for (std::size_t c = 0; c < d; ++c) dst[c] += gm[c];
    }
  });
}

namespace {

void check_rows(std::span<const std::size_t> rows, std::size_t limit, const char* op) {
  for (auto r : rows) {
    if (r >= limit) {
      throw IndexError(std::string(op) + ": index " + std::to_string(r) + " out of range for " +
                       std::to_string(limit) + " rows");
    }
  }
}

}  // namespace

Tensor gather_difference(const Tensor& a, std::span<const std::size_t> a_rows, const Tensor& b,
                         std::span<const std::size_t> b_rows, const Tensor& c) {
  require_2d(a, "gather_difference");
  require_2d(b, "gather_difference");
  require_2d(c, "gather_difference");
  const std::size_t m = c.dim(0), d = c.dim(1);
  if (a.dim(1) != d || b.dim(1) != d || a_rows.size() != m || b_rows.size() != m) {
    throw DimensionError("gather_difference: operands " + shape_string(a.shape()) + ", " + shape_string(b.shape()) +
                         ", " + shape_string(c.shape()) + " with " + std::to_string(a_rows.size()) + "/" +
                         std::to_string(b_rows.size()) + " indices do not compose");
  }
  check_rows(a_rows, a.dim(0), "gather_difference");
  check_rows(b_rows, b.dim(0), "gather_difference");
  std::vector<std::size_t> ia(a_rows.begin(), a_rows.end()), ib(b_rows.begin(), b_rows.end());
  Buffer out(m * d);
  const double *pa = a.data().data(), *pb = b.data().data(), *pc = c.data().data();
  for (std::size_t r = 0; r < m; ++r) {
    const double* ra = pa + ia[r] * d;
    const double* rb = pb + ib[r] * d;
    const double* rc = pc + r * d;
    double* o = out.data() + r * d;
    for (std::size_t j = 0; j < d; ++j) o[j] = (ra[j] - rb[j]) + rc[j];
  }
  return Tensor::make_result({m, d}, std::move(out), {a, b, c},
                             [ia = std::move(ia), ib = std::move(ib), m, d](TensorNode& self) {
                               const double* g = self.grad.data();
                               if (wants(self, 0)) {
                                 double* ga = self.parents[0]->grad.data();
                                 for (std::size_t r = 0; r < m; ++r)
                                   for (std::size_t j = 0; j < d; ++j) ga[ia[r] * d + j] += g[r * d + j];
                               }
                               if (wants(self, 1)) {
                                 double* gb = self.parents[1]->grad.data();
                                 for (std::size_t r = 0; r < m; ++r)
                                   for (std::size_t j = 0; j < d; ++j) gb[ib[r] * d + j] -= g[r * d + j];
                               }
                               if (wants(self, 2)) {
                                 double* gc = self.parents[2]->grad.data();
                                 for (std::size_t i = 0; i < m * d; ++i) gc[i] += g[i];
                               }
                             });
}

Tensor weighted_gather_sum(const Tensor& weights, const Tensor& values, std::span<const std::size_t> rows,
                           const Tensor& offsets, std::size_t group) {
  require_2d(weights, "weighted_gather_sum");
  require_2d(values, "weighted_gather_sum");
  require_same_shape(weights, offsets, "weighted_gather_sum");
  const std::size_t m = weights.dim(0), d = weights.dim(1);
  if (group == 0 || m % group != 0 || rows.size() != m || values.dim(1) != d) {
    throw DimensionError("weighted_gather_sum: weights " + shape_string(weights.shape()) + ", values " +
                         shape_string(values.shape()) + " with " + std::to_string(rows.size()) +
                         " indices in groups of " + std::to_string(group) + " do not compose");
  }
  check_rows(rows, values.dim(0), "weighted_gather_sum");
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  const std::size_t groups = m / group;
  Buffer out(groups * d, 0.0);
  const double *w = weights.data().data(), *v = values.data().data(), *e = offsets.data().data();
  for (std::size_t q = 0; q < groups; ++q) {
    double* o = out.data() + q * d;
    for (std::size_t k = 0; k < group; ++k) {
      const std::size_t r = q * group + k;
      const double* vr = v + idx[r] * d;
      for (std::size_t j = 0; j < d; ++j) o[j] += w[r * d + j] * (vr[j] + e[r * d + j]);
    }
  }
  return Tensor::make_result(
      {groups, d}, std::move(out), {weights, values, offsets}, [idx = std::move(idx), group, groups, d](TensorNode& self) {
        const double* g = self.grad.data();
        const double* w = self.parents[0]->value.data();
        const double* v = self.parents[1]->value.data();
        const double* e = self.parents[2]->value.data();
        double* gw = wants(self, 0) ? self.parents[0]->grad.data() : nullptr;
        double* gv = wants(self, 1) ? self.parents[1]->grad.data() : nullptr;
        double* ge = wants(self, 2) ? self.parents[2]->grad.data() : nullptr;
        for (std::size_t q = 0; q < groups; ++q) {
          const double* gq = g + q * d;
          for (std::size_t k = 0; k < group; ++k) {
            const std::size_t r = q * group + k;
            const double* vr = v + idx[r] * d;
            const double* wr = w + r * d;
            const double* er = e + r * d;
            if (gw) {
              for (std::size_t j = 0; j < d; ++j) gw[r * d + j] += gq[j] * (vr[j] + er[j]);
            }
            if (gv) {
              double* gvr = gv + idx[r] * d;
              for (std::size_t j = 0; j < d; ++j) gvr[j] += gq[j] * wr[j];
            }
            if (ge) {
              for (std::size_t j = 0; j < d; ++j) ge[r * d + j] += gq[j] * wr[j];
            }
          }
        }
      });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  require_2d(a, "concat_cols");
  require_2d(b, "concat_cols");
  if (a.dim(0) != b.dim(0)) {
    throw DimensionError("concat_cols: row mismatch " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
  const std::size_t n = a.dim(0), ca = a.dim(1), cb = b.dim(1), w = ca + cb;
  Buffer out(n * w);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy_n(a.data().data() + r * ca, ca, out.data() + r * w);
    std::copy_n(b.data().data() + r * cb, cb, out.data() + r * w + ca);
  }
  return Tensor::make_result({n, w}, std::move(out), {a, b}, [n, ca, cb, w](TensorNode& self) {
    auto& pa = *self.parents[0];
    auto& pb = *self.parents[1];
    for (std::size_t r = 0; r < n; ++r) {
      if (pa.requires_grad) {
        for (std::size_t c = 0; c < ca; ++c) pa.grad[r * ca + c] += self.grad[r * w + c];
      }
      if (pb.requires_grad) {
        for (std::size_t c = 0; c < cb; ++c) pb.grad[r * cb + c] += self.grad[r * w + ca + c];
      }
    }
  });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_numel(shape) != a.numel()) {
    throw DimensionError("reshape: " + shape_string(a.shape()) + " to " + shape_string(shape));
  }
  Buffer out(a.data().begin(), a.data().end());
  return Tensor::make_result(std::move(shape), std::move(out), {a}, [](TensorNode& self) {
    auto& g = self.parents[0]->grad;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

Tensor weighted_nll(const Tensor& log_probs, std::span<const int> labels, std::span<const double> weights) {
  require_2d(log_probs, "weighted_nll");
  const std::size_t n = log_probs.dim(0), classes = log_probs.dim(1);
  if (labels.size() != n) {
    throw DimensionError("weighted_nll: " + std::to_string(labels.size()) + " labels for " + std::to_string(n) +
                         " rows");
  }
  if (weights.size() != classes) throw DimensionError("weighted_nll: one weight per class required");
  std::vector<double> coef(n);
  std::vector<std::size_t> col(n);
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (labels[r] < 0 || static_cast<std::size_t>(labels[r]) >= classes) {
      throw IndexError("weighted_nll: label " + std::to_string(labels[r]) + " out of range");
    }
    col[r] = static_cast<std::size_t>(labels[r]);
    coef[r] = -weights[col[r]] / static_cast<double>(n);
    acc += coef[r] * log_probs[r * classes + col[r]];
  }
  return Tensor::make_result({1}, Buffer{acc}, {log_probs},
                             [coef = std::move(coef), col = std::move(col), classes](TensorNode& self) {
                               auto& g = self.parents[0]->grad;
                               for (std::size_t r = 0; r < coef.size(); ++r) {
                                 g[r * classes + col[r]] += self.grad[0] * coef[r];
                               }
                             });
}

}  // namespace moseve::ad
