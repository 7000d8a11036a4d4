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

#include "moseve/autodiff/tensor.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <new>
#include <numeric>
#include <unordered_set>

#include "moseve/errors.hpp"

namespace moseve::ad {

namespace {

thread_local bool g_grad_enabled = true;

// Freed tensor storage is kept for reuse, bucketed by power-of-two size. Fresh
// memory from the OS costs a page fault per 4 KiB, and a training step
// allocates the same shapes as the step before it.
constexpr std::align_val_t kAlign{64};

class BufferPool {
 public:
  BufferPool() { alive = true; }
  ~BufferPool() {
    alive = false;
    for (auto& bucket : free_)
      for (void* p : bucket) ::operator delete(p, kAlign);
  }

  void* acquire(std::size_t bytes) {
    auto& bucket = free_[size_class(bytes)];
    if (bucket.empty()) return ::operator new(std::size_t{1} << size_class(bytes), kAlign);
    void* p = bucket.back();
    bucket.pop_back();
    return p;
  }
  void release(void* p, std::size_t bytes) { free_[size_class(bytes)].push_back(p); }

  // Trivially destructible, so it stays readable while other thread_locals
  // (tensors among them) are torn down after the pool.
  static thread_local bool alive;

 private:
  static std::size_t size_class(std::size_t bytes) {
    return std::max<std::size_t>(6, std::bit_width(std::max<std::size_t>(bytes, 1) - 1));
  }
  std::array<std::vector<void*>, 64> free_;
};

thread_local bool BufferPool::alive = false;
thread_local BufferPool g_pool;

}  // namespace

namespace detail {

void* acquire_buffer(std::size_t bytes) { return g_pool.acquire(bytes); }

void release_buffer(void* p, std::size_t bytes) noexcept {
  if (BufferPool::alive) {
    try {
      g_pool.release(p, bytes);
      return;
    } catch (const std::bad_alloc&) {
    }
  }
  ::operator delete(p, kAlign);
}

}  // namespace detail

std::size_t shape_numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  const std::size_t n = shape_numel(shape);
  return from(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::from(Shape shape, std::vector<double> values, bool requires_grad) {
  for (std::size_t extent : shape) {
    if (extent == 0) throw DimensionError("tensor extents must be positive, got " + shape_string(shape));
  }
  if (values.size() != shape_numel(shape)) {
    throw DimensionError("value count " + std::to_string(values.size()) + " does not match shape " +
                         shape_string(shape));
  }
  auto node = std::make_shared<TensorNode>();
  node->shape = std::move(shape);
  node->value.assign(values.begin(), values.end());
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value, bool requires_grad) { return from({1}, {value}, requires_grad); }

Tensor Tensor::make_result(Shape shape, Buffer value, std::vector<Tensor> parents,
                           std::function<void(TensorNode&)> backward) {
  auto node = std::make_shared<TensorNode>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  if (g_grad_enabled) {
    const bool any = std::any_of(parents.begin(), parents.end(),
                                 [](const Tensor& p) { return p.defined() && p.requires_grad(); });
    if (any) {
      node->requires_grad = true;
      node->parents.reserve(parents.size());
      for (auto& p : parents) node->parents.push_back(p.node_);
      node->backward = std::move(backward);
    }
  }
  return Tensor(std::move(node));
}

std::size_t Tensor::numel() const { return node_->value.size(); }

std::size_t Tensor::dim(std::size_t axis) const {
  if (axis >= shape().size()) throw DimensionError("axis out of range for " + shape_string(shape()));
  return shape()[axis];
}

std::size_t Tensor::rows() const { return rank() >= 2 ? shape()[0] : numel(); }
std::size_t Tensor::cols() const { return rank() >= 2 ? numel() / shape()[0] : 1; }

std::span<double> Tensor::mutable_data() { return node_->value; }
std::span<const double> Tensor::grad() const { return node_->grad; }

std::span<double> Tensor::mutable_grad() {
  node_->ensure_grad();
  return node_->grad;
}

bool Tensor::has_grad() const { return node_->grad.size() == node_->value.size(); }
bool Tensor::requires_grad() const { return node_->requires_grad; }
void Tensor::set_requires_grad(bool on) { node_->requires_grad = on; }

void Tensor::zero_grad() { node_->grad.assign(node_->value.size(), 0.0); }

double Tensor::item() const {
  if (numel() != 1) throw ContractError("item() on tensor of shape " + shape_string(shape()));
  return node_->value[0];
}

double Tensor::at(std::size_t row, std::size_t col) const {
  if (row >= rows() || col >= cols()) throw IndexError("tensor index out of range");
  return node_->value[row * cols() + col];
}

bool Tensor::is_valid() const {
  return std::all_of(node_->value.begin(), node_->value.end(), [](double v) { return std::isfinite(v); });
}

void Tensor::backward() const {
  if (!defined() || numel() != 1) {
    throw ContractError("backward() requires a scalar loss, got " +
                        (defined() ? shape_string(shape()) : std::string("undefined")));
  }
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order (parents before children).
  std::vector<TensorNode*> order;
  std::unordered_set<TensorNode*> seen;
  std::vector<std::pair<TensorNode*, std::size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      TensorNode* p = n->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  // Intermediate grads restart from zero; ensure_grad refills them just before
  // their first use. clear() keeps the capacity.
  for (TensorNode* n : order) {
    if (!n->is_leaf()) n->grad.clear();
  }
  node_->ensure_grad();
  node_->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    TensorNode* n = *it;
    if (n->backward) {
      for (auto& p : n->parents) {
        if (p->requires_grad) p->ensure_grad();
      }
      n->backward(*n);
    }
  }
}

Tensor Tensor::detach() const { return from(shape(), {node_->value.begin(), node_->value.end()}, false); }

Tensor Tensor::clone() const {
  return from(shape(), {node_->value.begin(), node_->value.end()}, node_->requires_grad);
}

}  // namespace moseve::ad
