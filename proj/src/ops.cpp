#include "lesion/ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "lesion/error.hpp"

namespace lesion {

namespace {

Tensor checked(Tensor out, const char* op) {
  if (!out.all_finite()) {
    throw NumericError(std::string("non-finite value produced by ") + op);
  }
  return out;
}

void expect_rank(const Var& v, std::size_t rank, const char* op, const char* what) {
  if (v.shape().size() != rank) {
    throw DimensionError(std::string(op) + ": " + what + " must have rank " +
                         std::to_string(rank) + ", got " + to_string(v.shape()));
  }
}

// Copy of a [C, H, W] tensor with a zero border of width pad.
std::vector<double> pad_planes(const Tensor& in, std::size_t pad) {
  const std::size_t c = in.dim(0), h = in.dim(1), w = in.dim(2);
  const std::size_t hp = h + 2 * pad, wp = w + 2 * pad;
  std::vector<double> out(c * hp * wp, 0.0);
  for (std::size_t ci = 0; ci < c; ++ci) {
    for (std::size_t y = 0; y < h; ++y) {
      const double* src = in.data() + (ci * h + y) * w;
      std::copy(src, src + w, out.data() + (ci * hp + y + pad) * wp + pad);
    }
  }
  return out;
}

}  // namespace

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Var conv2d(Var input, Var kernels, Var bias, std::size_t stride, std::size_t padding) {
  expect_rank(input, 3, "conv2d", "input");
  expect_rank(kernels, 4, "conv2d", "kernels");
  const Shape& is = input.shape();
  const Shape& ks = kernels.shape();
  if (ks[1] != is[0]) {
    throw DimensionError("conv2d: input " + to_string(is) + " has " + std::to_string(is[0]) +
                         " channels but kernels " + to_string(ks) + " expect " +
                         std::to_string(ks[1]));
  }
  if (ks[2] != ks[3]) throw DimensionError("conv2d: kernels must be square, got " + to_string(ks));
  if (stride == 0) throw ConfigError("conv2d: stride must be >= 1");
  const std::size_t c_in = is[0], h = is[1], w = is[2];
  const std::size_t c_out = ks[0], k = ks[2];
  if (k > h + 2 * padding || k > w + 2 * padding) {
    throw DimensionError("conv2d: kernel " + to_string(ks) + " larger than padded input " +
                         to_string(is) + " with padding " + std::to_string(padding));
  }
  if (bias.valid() && bias.shape() != Shape{c_out}) {
    throw DimensionError("conv2d: bias " + to_string(bias.shape()) + " does not match " +
                         std::to_string(c_out) + " output channels");
  }
  const std::size_t hp = h + 2 * padding, wp = w + 2 * padding;
  const std::size_t ho = (hp - k) / stride + 1, wo = (wp - k) / stride + 1;

  std::vector<double> padded = pad_planes(input.value(), padding);
  const double* kw = kernels.value().data();
  Tensor out({c_out, ho, wo});
  for (std::size_t co = 0; co < c_out; ++co) {
    double* plane = out.data() + co * ho * wo;
    if (bias.valid()) std::fill(plane, plane + ho * wo, bias.value()[co]);
    for (std::size_t ci = 0; ci < c_in; ++ci) {
      const double* src_plane = padded.data() + ci * hp * wp;
      for (std::size_t ky = 0; ky < k; ++ky) {
        for (std::size_t kx = 0; kx < k; ++kx) {
          const double wv = kw[((co * c_in + ci) * k + ky) * k + kx];
          for (std::size_t oy = 0; oy < ho; ++oy) {
            const double* src = src_plane + (oy * stride + ky) * wp + kx;
            double* dst = plane + oy * wo;
            for (std::size_t ox = 0; ox < wo; ++ox) dst[ox] += wv * src[ox * stride];
          }
        }
      }
    }
  }

  std::vector<Var> inputs{input, kernels};
  if (bias.valid()) inputs.push_back(bias);
  auto backward = [input, kernels, bias, padded = std::move(padded), c_in, h, w, c_out, k,
                   hp, wp, ho, wo, stride, padding](Tape& tape, std::span<const double> g) {
    if (bias.valid() && bias.requires_grad()) {
      std::span<double> gb = tape.grad_buffer(bias.id());
      for (std::size_t co = 0; co < c_out; ++co) {
        double s = 0.0;
        for (std::size_t i = 0; i < ho * wo; ++i) s += g[co * ho * wo + i];
        gb[co] += s;
      }
    }
    if (kernels.requires_grad()) {
      std::span<double> gk = tape.grad_buffer(kernels.id());
      for (std::size_t co = 0; co < c_out; ++co) {
        const double* gplane = g.data() + co * ho * wo;
        for (std::size_t ci = 0; ci < c_in; ++ci) {
          const double* src_plane = padded.data() + ci * hp * wp;
          for (std::size_t ky = 0; ky < k; ++ky) {
            for (std::size_t kx = 0; kx < k; ++kx) {
              double s = 0.0;
              for (std::size_t oy = 0; oy < ho; ++oy) {
                const double* src = src_plane + (oy * stride + ky) * wp + kx;
                const double* gr = gplane + oy * wo;
                for (std::size_t ox = 0; ox < wo; ++ox) s += gr[ox] * src[ox * stride];
              }
              gk[((co * c_in + ci) * k + ky) * k + kx] += s;
            }
          }
        }
      }
    }
    if (input.requires_grad()) {
      std::vector<double> gpad(c_in * hp * wp, 0.0);
      const double* kw = kernels.value().data();
      for (std::size_t co = 0; co < c_out; ++co) {
        const double* gplane = g.data() + co * ho * wo;
        for (std::size_t ci = 0; ci < c_in; ++ci) {
          double* dst_plane = gpad.data() + ci * hp * wp;
          for (std::size_t ky = 0; ky < k; ++ky) {
            for (std::size_t kx = 0; kx < k; ++kx) {
              const double wv = kw[((co * c_in + ci) * k + ky) * k + kx];
              for (std::size_t oy = 0; oy < ho; ++oy) {
                double* dst = dst_plane + (oy * stride + ky) * wp + kx;
                const double* gr = gplane + oy * wo;
                for (std::size_t ox = 0; ox < wo; ++ox) dst[ox * stride] += wv * gr[ox];
              }
            }
          }
        }
      }
      std::span<double> gi = tape.grad_buffer(input.id());
      for (std::size_t ci = 0; ci < c_in; ++ci) {
        for (std::size_t y = 0; y < h; ++y) {
          const double* src = gpad.data() + (ci * hp + y + padding) * wp + padding;
          double* dst = gi.data() + (ci * h + y) * w;
          for (std::size_t x = 0; x < w; ++x) dst[x] += src[x];
        }
      }
    }
  };
  return input.tape().record(checked(std::move(out), "conv2d"), inputs, std::move(backward));
}

Var conv2d(Var input, Var kernels, std::size_t stride, std::size_t padding) {
  return conv2d(input, kernels, Var{}, stride, padding);
}

Var max_pool2d(Var input, std::size_t window) {
  expect_rank(input, 3, "max_pool2d", "input");
  const std::size_t c = input.shape()[0], h = input.shape()[1], w = input.shape()[2];
  if (window == 0) throw ConfigError("max_pool2d: window must be >= 1");
  if (window > h || window > w) {
    throw DimensionError("max_pool2d: window " + std::to_string(window) +
                         " larger than spatial extent of " + to_string(input.shape()));
  }
  const std::size_t ho = h / window, wo = w / window;
  const Tensor& in = input.value();
  Tensor out({c, ho, wo});
  std::vector<std::size_t> argmax(out.size());
  for (std::size_t ci = 0; ci < c; ++ci) {
    for (std::size_t oy = 0; oy < ho; ++oy) {
      for (std::size_t ox = 0; ox < wo; ++ox) {
        std::size_t best = (ci * h + oy * window) * w + ox * window;
        for (std::size_t dy = 0; dy < window; ++dy) {
          for (std::size_t dx = 0; dx < window; ++dx) {
            const std::size_t idx = (ci * h + oy * window + dy) * w + ox * window + dx;
            if (in[idx] > in[best]) best = idx;
          }
        }
        const std::size_t o = (ci * ho + oy) * wo + ox;
        out[o] = in[best];
        argmax[o] = best;
      }
    }
  }
  const std::array<Var, 1> inputs{input};
  return input.tape().record(
      std::move(out), inputs,
      [input, argmax = std::move(argmax)](Tape& tape, std::span<const double> g) {
        std::span<double> gi = tape.grad_buffer(input.id());
        for (std::size_t o = 0; o < argmax.size(); ++o) gi[argmax[o]] += g[o];
      });
}

Var linear(Var input, Var weight, Var bias) {
  expect_rank(input, 1, "linear", "input");
  expect_rank(weight, 2, "linear", "weight");
  const std::size_t m = weight.shape()[0], n = weight.shape()[1];
  if (input.shape()[0] != n) {
    throw DimensionError("linear: input " + to_string(input.shape()) +
                         " does not match weight " + to_string(weight.shape()));
  }
  if (bias.shape() != Shape{m}) {
    throw DimensionError("linear: bias " + to_string(bias.shape()) + " does not match weight " +
                         to_string(weight.shape()));
  }
  const double* x = input.value().data();
  const double* wv = weight.value().data();
  Tensor out({m});
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    const double* row = wv + i * n;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    out[i] = s + bias.value()[i];
  }
  const std::array<Var, 3> inputs{input, weight, bias};
  return input.tape().record(
      checked(std::move(out), "linear"), inputs,
      [input, weight, bias, m, n](Tape& tape, std::span<const double> g) {
        if (bias.requires_grad()) {
          std::span<double> gb = tape.grad_buffer(bias.id());
          for (std::size_t i = 0; i < m; ++i) gb[i] += g[i];
        }
        if (weight.requires_grad()) {
          std::span<double> gw = tape.grad_buffer(weight.id());
          const double* x = input.value().data();
          for (std::size_t i = 0; i < m; ++i) {
            double* row = gw.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) row[j] += g[i] * x[j];
          }
        }
        if (input.requires_grad()) {
          std::span<double> gi = tape.grad_buffer(input.id());
          const double* wv = weight.value().data();
          for (std::size_t i = 0; i < m; ++i) {
            const double* row = wv + i * n;
            for (std::size_t j = 0; j < n; ++j) gi[j] += g[i] * row[j];
          }
        }
      });
}

Var relu(Var input) {
  Tensor out = input.value();
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  const std::array<Var, 1> inputs{input};
  return input.tape().record(std::move(out), inputs,
                             [input](Tape& tape, std::span<const double> g) {
                               std::span<double> gi = tape.grad_buffer(input.id());
                               const Tensor& x = input.value();
                               for (std::size_t i = 0; i < g.size(); ++i) {
                                 if (x[i] > 0.0) gi[i] += g[i];
                               }
                             });
}

Var sigmoid(Var input) {
  Tensor out = input.value();
  for (double& v : out.values()) v = stable_sigmoid(v);
  const std::array<Var, 1> inputs{input};
  const Tensor saved = out;
  return input.tape().record(std::move(out), inputs,
                             [input, saved](Tape& tape, std::span<const double> g) {
                               std::span<double> gi = tape.grad_buffer(input.id());
                               for (std::size_t i = 0; i < g.size(); ++i) {
                                 gi[i] += g[i] * saved[i] * (1.0 - saved[i]);
                               }
                             });
}

Var dropout(Var input, double rate, bool train_mode, Rng* rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (!train_mode || rate == 0.0) return input;
  if (rng == nullptr) throw ContractError("dropout in training mode needs a random generator");
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(input.value().size());
  for (double& m : mask) m = rng->uniform() < rate ? 0.0 : keep_scale;
  Tensor out = input.value();
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] *= mask[i];
  const std::array<Var, 1> inputs{input};
  return input.tape().record(std::move(out), inputs,
                             [input, mask = std::move(mask)](Tape& tape,
                                                             std::span<const double> g) {
                               std::span<double> gi = tape.grad_buffer(input.id());
                               for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * mask[i];
                             });
}

Var concat(Var a, Var b) {
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  if (sa.size() != sb.size() || !std::equal(sa.begin() + 1, sa.end(), sb.begin() + 1)) {
    throw DimensionError("concat: " + to_string(sa) + " and " + to_string(sb) +
                         " differ outside axis 0");
  }
  Shape shape = sa;
  shape[0] += sb[0];
  std::vector<double> values(a.value().values().begin(), a.value().values().end());
  values.insert(values.end(), b.value().values().begin(), b.value().values().end());
  const std::size_t split = a.value().size();
  const std::array<Var, 2> inputs{a, b};
  return a.tape().record(Tensor(std::move(shape), std::move(values)), inputs,
                         [a, b, split](Tape& tape, std::span<const double> g) {
                           if (a.requires_grad()) {
                             std::span<double> ga = tape.grad_buffer(a.id());
                             for (std::size_t i = 0; i < split; ++i) ga[i] += g[i];
                           }
                           if (b.requires_grad()) {
                             std::span<double> gb = tape.grad_buffer(b.id());
                             for (std::size_t i = split; i < g.size(); ++i) gb[i - split] += g[i];
                           }
                         });
}

Var flatten(Var input) {
  const std::array<Var, 1> inputs{input};
  return input.tape().record(input.value().reshaped({input.value().size()}), inputs,
                             [input](Tape& tape, std::span<const double> g) {
                               std::span<double> gi = tape.grad_buffer(input.id());
                               for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
                             });
}

Var add(Var a, Var b) {
  if (a.shape() != b.shape()) {
    throw DimensionError("add: " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  }
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.value()[i];
  const std::array<Var, 2> inputs{a, b};
  return a.tape().record(checked(std::move(out), "add"), inputs,
                         [a, b](Tape& tape, std::span<const double> g) {
                           for (Var v : {a, b}) {
                             if (!v.requires_grad()) continue;
                             std::span<double> gv = tape.grad_buffer(v.id());
                             for (std::size_t i = 0; i < g.size(); ++i) gv[i] += g[i];
                           }
                         });
}

Var mul(Var a, Var b) {
  if (a.shape() != b.shape()) {
    throw DimensionError("mul: " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  }
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  const std::array<Var, 2> inputs{a, b};
  return a.tape().record(checked(std::move(out), "mul"), inputs,
                         [a, b](Tape& tape, std::span<const double> g) {
                           if (a.requires_grad()) {
                             std::span<double> ga = tape.grad_buffer(a.id());
                             for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b.value()[i];
                           }
                           if (b.requires_grad()) {
                             std::span<double> gb = tape.grad_buffer(b.id());
                             for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a.value()[i];
                           }
                         });
}

Var scale(Var input, double factor) {
  Tensor out = input.value();
  for (double& v : out.values()) v *= factor;
  const std::array<Var, 1> inputs{input};
  return input.tape().record(checked(std::move(out), "scale"), inputs,
                             [input, factor](Tape& tape, std::span<const double> g) {
                               std::span<double> gi = tape.grad_buffer(input.id());
                               for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i] * factor;
                             });
}

Var sum(Var input) {
  double s = 0.0;
  for (double v : input.value().values()) s += v;
  const std::array<Var, 1> inputs{input};
  return input.tape().record(checked(Tensor::scalar(s), "sum"), inputs,
                             [input](Tape& tape, std::span<const double> g) {
                               std::span<double> gi = tape.grad_buffer(input.id());
                               for (double& v : gi) v += g[0];
                             });
}

Var mean_of(std::span<const Var> scalars) {
  if (scalars.empty()) throw ContractError("mean_of needs at least one value");
  double s = 0.0;
  for (const Var& v : scalars) {
    if (v.value().size() != 1) {
      throw DimensionError("mean_of: operand of shape " + to_string(v.shape()) + " is not scalar");
    }
    s += v.value()[0];
  }
  const double inv = 1.0 / static_cast<double>(scalars.size());
  std::vector<Var> inputs(scalars.begin(), scalars.end());
  Tape& tape = scalars.front().tape();
  return tape.record(Tensor::scalar(s * inv), inputs,
                     [inputs, inv](Tape& t, std::span<const double> g) {
                       for (const Var& v : inputs) {
                         if (v.requires_grad()) t.grad_buffer(v.id())[0] += g[0] * inv;
                       }
                     });
}

Var bce_with_logits(Var logit, int label) {
  if (logit.value().size() != 1) {
    throw DimensionError("bce_with_logits: logit must be a single value, got " +
                         to_string(logit.shape()));
  }
  if (label != 0 && label != 1) {
    throw DataError("bce_with_logits: label must be 0 or 1, got " + std::to_string(label));
  }
  const double z = logit.value()[0];
  if (!std::isfinite(z)) throw NumericError("bce_with_logits: non-finite logit");
  const double y = static_cast<double>(label);
  const double loss = std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
  const std::array<Var, 1> inputs{logit};
  return logit.tape().record(Tensor::scalar(loss), inputs,
                             [logit, z, y](Tape& tape, std::span<const double> g) {
                               tape.grad_buffer(logit.id())[0] += g[0] * (stable_sigmoid(z) - y);
                             });
}

}  // namespace lesion
