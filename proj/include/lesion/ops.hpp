#pragma once

#include <cstddef>
#include <span>

#include "lesion/rng.hpp"
#include "lesion/tape.hpp"

namespace lesion {

// Cross-correlation of a [C_in, H, W] input with [C_out, C_in, k, k] kernels
// plus one bias per output channel. Output is
// [C_out, (H + 2p - k)/s + 1, (W + 2p - k)/s + 1] with zero padding p.
Var conv2d(Var input, Var kernels, Var bias, std::size_t stride = 1, std::size_t padding = 0);
Var conv2d(Var input, Var kernels, std::size_t stride = 1, std::size_t padding = 0);

// Non-overlapping max pooling (stride == window). Ties route the gradient to
// the first maximum in row-major order.
Var max_pool2d(Var input, std::size_t window);

// weight [m, n] times input [n] plus bias [m].
Var linear(Var input, Var weight, Var bias);

Var relu(Var input);
Var sigmoid(Var input);

// Inverted dropout: survivors are scaled by 1/(1 - rate) in training mode,
// identity otherwise. rng is required only when train_mode and rate > 0.
Var dropout(Var input, double rate, bool train_mode, Rng* rng);

// Concatenation along axis 0; trailing axes must agree.
Var concat(Var a, Var b);

Var flatten(Var input);
Var add(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var input, double factor);
Var sum(Var input);
Var mean_of(std::span<const Var> scalars);

// Binary cross-entropy on a single logit, in the overflow-free form
// max(z, 0) - z*y + log(1 + exp(-|z|)).
Var bce_with_logits(Var logit, int label);

double stable_sigmoid(double z);

}  // namespace lesion
