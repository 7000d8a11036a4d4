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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moseve/autodiff/tensor.hpp"

// Differentiable operations. 2-D tensors are [rows x cols]; 1-D tensors of
// length n act as row vectors where noted.

namespace moseve::ad {

/// out[n,j] = sum_i input[n,i] * weight[i,j] + bias[j]
Tensor affine(const Tensor& input, const Tensor& weight, const Tensor& bias);

Tensor relu(const Tensor& input);
Tensor abs(const Tensor& input);
Tensor square(const Tensor& input);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
/// Every element of `a` times the single element of `s`.
Tensor scale_by(const Tensor& a, const Tensor& s);
/// Row r of `a` times s[r]; `s` has one entry per row.
Tensor scale_rows(const Tensor& a, const Tensor& s);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
/// Column means of a 2-D tensor, shape [1 x cols].
Tensor mean_rows(const Tensor& a);

Tensor softmax_lastdim(const Tensor& input);
Tensor log_softmax_lastdim(const Tensor& input);

/// Softmax over consecutive blocks of `group` rows, independently per column.
/// Input [G*group x D]; each column of each block sums to one.
Tensor softmax_groups(const Tensor& input, std::size_t group);
/// Sums consecutive blocks of `group` rows: [G*group x D] -> [G x D].
Tensor group_sum(const Tensor& input, std::size_t group);

/// out[m] = source[indices[m]]; backward scatter-adds, so repeats accumulate.
Tensor gather_rows(const Tensor& source, std::span<const std::size_t> indices);

/// out[m] = a[a_rows[m]] - b[b_rows[m]] + c[m], without materializing the
/// gathers.
Tensor gather_difference(const Tensor& a, std::span<const std::size_t> a_rows, const Tensor& b,
                         std::span<const std::size_t> b_rows, const Tensor& c);
/// out[q] = sum_k weights[q*group+k] * (values[rows[q*group+k]] + offsets[q*group+k]),
/// elementwise per column. Equals group_sum(mul(weights, add(gather_rows(values,
/// rows), offsets)), group).
Tensor weighted_gather_sum(const Tensor& weights, const Tensor& values, std::span<const std::size_t> rows,
                           const Tensor& offsets, std::size_t group);
/// [N x A] and [N x B] -> [N x (A+B)].
Tensor concat_cols(const Tensor& a, const Tensor& b);

Tensor reshape(const Tensor& a, Shape shape);

/// -(1/N) sum_n weights[labels[n]] * log_probs[n, labels[n]].
Tensor weighted_nll(const Tensor& log_probs, std::span<const int> labels, std::span<const double> weights);

}  // namespace moseve::ad
