#include "lesion/tape.hpp"

#include <algorithm>

#include "lesion/error.hpp"

namespace lesion {

const Tensor& Var::value() const { return tape_->value(*this); }

bool Var::requires_grad() const { return tape_->requires_grad(*this); }

Var Tape::leaf(Tensor value, bool requires_grad) {
  slots_.push_back(Slot{std::move(value), {}, requires_grad});
  return Var(this, slots_.size() - 1);
}

Var Tape::record(Tensor value, std::span<const Var> inputs, BackwardFn backward) {
  const bool needs_grad =
      std::any_of(inputs.begin(), inputs.end(), [this](Var v) {
        if (&v.tape() != this) throw ContractError("op mixes values from different tapes");
        return requires_grad(v);
      });
  slots_.push_back(Slot{std::move(value), {}, needs_grad});
  const std::size_t id = slots_.size() - 1;
  if (needs_grad) nodes_.push_back(Node{id, std::move(backward)});
  return Var(this, id);
}

Tensor Tape::grad(Var v) const {
  const Slot& slot = slots_.at(v.id());
  if (slot.grad.empty()) return Tensor(slot.value.shape());
  return Tensor(slot.value.shape(), slot.grad);
}

std::span<double> Tape::grad_buffer(std::size_t id) {
  Slot& slot = slots_.at(id);
  if (slot.grad.empty()) slot.grad.assign(slot.value.size(), 0.0);
  return slot.grad;
}

void Tape::backward(Var loss) {
  if (&loss.tape() != this) throw ContractError("loss does not belong to this tape");
  if (value(loss).size() != 1) {
    throw ContractError("backward needs a scalar loss, got shape " +
                        to_string(value(loss).shape()));
  }
  for (Slot& slot : slots_) slot.grad.clear();
  if (!requires_grad(loss)) return;
  grad_buffer(loss.id())[0] = 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (it->output > loss.id()) continue;
    const std::vector<double>& out_grad = slots_[it->output].grad;
    if (out_grad.empty()) continue;
    it->backward(*this, out_grad);
  }
}

void backward(Var loss) { loss.tape().backward(loss); }

}  // namespace lesion
