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
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace moseve::ad {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

namespace detail {
/// 64-byte aligned blocks from a per-thread pool of freed tensor storage.
void* acquire_buffer(std::size_t bytes);
void release_buffer(void* p, std::size_t bytes) noexcept;
}  // namespace detail

/// Allocator for tensor storage: pooled, 64-byte aligned, and `Buffer(n)` or
/// `resize` leave the new elements uninitialized. Ops write every element of
/// their outputs.
template <typename T>
struct BufferAllocator {
  using value_type = T;

  BufferAllocator() = default;
  template <typename U>
  BufferAllocator(const BufferAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(detail::acquire_buffer(n * sizeof(T))); }
  void deallocate(T* p, std::size_t n) noexcept { detail::release_buffer(p, n * sizeof(T)); }
  template <typename U>
  void construct(U* p) noexcept {
    ::new (static_cast<void*>(p)) U;
  }
  template <typename U, typename... Args>
  void construct(U* p, Args&&... args) {
    ::new (static_cast<void*>(p)) U(std::forward<Args>(args)...);
  }
  friend bool operator==(const BufferAllocator&, const BufferAllocator&) { return true; }
};

using Buffer = std::vector<double, BufferAllocator<double>>;

/// One value in the recorded graph. Ops allocate a node per result; `backward`
/// reads `grad` of this node and accumulates into the parents' grads.
struct TensorNode {
  Shape shape;
  Buffer value;
  Buffer grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<TensorNode>> parents;
  std::function<void(TensorNode&)> backward;

  void ensure_grad() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  }
  bool is_leaf() const { return parents.empty(); }
};

/// Handle to a dense row-major array of doubles. Copies share storage, the
/// same way autograd frameworks hand tensors around.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  /// Builds an op result. When gradient recording is on and any parent needs a
  /// gradient, the node is linked into the graph with `backward`.
  static Tensor make_result(Shape shape, Buffer value, std::vector<Tensor> parents,
                            std::function<void(TensorNode&)> backward);
  static Tensor make_result(Shape shape, const std::vector<double>& value, std::vector<Tensor> parents,
                            std::function<void(TensorNode&)> backward) {
    return make_result(std::move(shape), Buffer(value.begin(), value.end()), std::move(parents), std::move(backward));
  }

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return shape().size(); }
  std::size_t numel() const;
  std::size_t dim(std::size_t axis) const;
  /// Leading extent for 2-D tensors, numel for 1-D.
  std::size_t rows() const;
  /// Trailing extent for 2-D tensors, 1 for 1-D.
  std::size_t cols() const;

  std::span<const double> data() const { return node_->value; }
  /// In-place access for initializers, optimizers, and finite differencing.
  std::span<double> mutable_data();
  std::span<const double> grad() const;
  std::span<double> mutable_grad();
  bool has_grad() const;

  bool requires_grad() const;
  void set_requires_grad(bool on);
  void zero_grad();

  double item() const;
  double operator[](std::size_t flat) const { return data()[flat]; }
  double at(std::size_t row, std::size_t col) const;

  /// False if any value is NaN or infinite.
  bool is_valid() const;

  /// Reverse-mode sweep from this scalar. Leaf grads accumulate across calls;
  /// intermediate grads are recomputed each call.
  void backward() const;

  /// Same values, cut from the graph.
  Tensor detach() const;
  Tensor clone() const;

  const std::shared_ptr<TensorNode>& node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<TensorNode> node) : node_(std::move(node)) {}
  std::shared_ptr<TensorNode> node_;
};

bool grad_enabled();

/// Disables graph recording on this thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

}  // namespace moseve::ad
