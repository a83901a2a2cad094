#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "lesion/tensor.hpp"

namespace lesion {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape
// is alive.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  bool requires_grad() const;
  bool valid() const { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Reverse-mode differentiation record (a Wengert list). Nodes are appended
// in evaluation order, so the append order is already topological.
class Tape {
 public:
  // Receives the gradient flowing into the node's output and accumulates
  // into its inputs through Tape::grad_buffer.
  using BackwardFn = std::function<void(Tape&, std::span<const double>)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor value, bool requires_grad = false);

  // Records an op output. When none of the inputs require a gradient the
  // node is dropped and the output becomes a constant.
  Var record(Tensor value, std::span<const Var> inputs, BackwardFn backward);

  const Tensor& value(Var v) const { return slots_.at(v.id()).value; }
  bool requires_grad(Var v) const { return slots_.at(v.id()).requires_grad; }

  // Gradient of the last backward() w.r.t. v; zeros when v was not reached.
  Tensor grad(Var v) const;

  // Accumulation buffer for v's gradient, allocated zeroed on first use.
  std::span<double> grad_buffer(std::size_t id);

  void backward(Var loss);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t value_count() const { return slots_.size(); }

 private:
  struct Slot {
    Tensor value;
    std::vector<double> grad;
    bool requires_grad = false;
  };
  struct Node {
    std::size_t output;
    BackwardFn backward;
  };

  std::deque<Slot> slots_;  // value() references stay valid as records are added
  std::vector<Node> nodes_;
};

// Backpropagates from a scalar loss through the tape the loss lives on.
void backward(Var loss);

}  // namespace lesion
