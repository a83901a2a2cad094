#include "lesion/attribution.hpp"

#include <algorithm>
#include <cmath>

#include "lesion/error.hpp"
#include "lesion/ops.hpp"

namespace lesion {

namespace {

double model_output(const Model& model, const Tensor& image, const Tensor& static_features,
                    AttributionTarget target) {
  const double z = forward(model, image, static_features, false).item();
  return target == AttributionTarget::logit ? z : stable_sigmoid(z);
}

AttributionMap run(const Model& model, const Tensor& image, const Tensor& baseline,
                   const Tensor& static_features, std::size_t steps, AttributionTarget target) {
  const std::size_t n = image.size();
  std::vector<double> grad_sum(n, 0.0);
  Tensor point(image.shape());
  for (std::size_t k = 1; k <= steps; ++k) {
    const double alpha = (static_cast<double>(k) - 0.5) / static_cast<double>(steps);
    for (std::size_t i = 0; i < n; ++i) point[i] = baseline[i] + alpha * (image[i] - baseline[i]);
    Tape tape;
    const BoundParameters params = bind(model, tape, false);
    Var x = tape.leaf(point, true);
    Var out = forward(model, params, x, tape.leaf(static_features), false, nullptr);
    if (target == AttributionTarget::probability) out = sigmoid(out);
    tape.backward(out);
    const Tensor g = tape.grad(x);
    for (std::size_t i = 0; i < n; ++i) grad_sum[i] += g[i];
  }
  AttributionMap map;
  map.phi = Tensor(image.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    map.phi[i] = (image[i] - baseline[i]) * grad_sum[i] / static_cast<double>(steps);
    total += map.phi[i];
  }
  map.steps_used = steps;
  map.output_at_input = model_output(model, image, static_features, target);
  map.output_at_baseline = model_output(model, baseline, static_features, target);
  map.completeness_gap = std::abs(total - (map.output_at_input - map.output_at_baseline));
  return map;
}

}  // namespace

AttributionMap integrated_gradients(const Model& model, const Sample& sample,
                                    const IntegratedGradientsOptions& options) {
  if (options.steps < 2) throw ConfigError("integrated gradients needs steps >= 2");
  const Tensor& image = sample.image;
  Tensor baseline = options.baseline ? *options.baseline : Tensor(image.shape());
  if (baseline.shape() != image.shape()) {
    throw DimensionError("baseline " + to_string(baseline.shape()) + " does not match image " +
                         to_string(image.shape()));
  }
  const Tensor static_features = static_tensor(sample);
  AttributionMap map = run(model, image, baseline, static_features, options.steps, options.target);
  const double delta = std::abs(map.output_at_input - map.output_at_baseline);
  if (options.tighten_steps > options.steps && map.completeness_gap > 0.01 * delta) {
    map = run(model, image, baseline, static_features, options.tighten_steps, options.target);
  }
  map.baseline_kind = options.baseline ? BaselineKind::custom : BaselineKind::black;
  return map;
}

Tensor render_map(const AttributionMap& map, RenderMode mode) {
  const Tensor& phi = map.phi;
  if (phi.rank() != 3) throw DimensionError("attribution map must be [C, H, W]");
  const std::size_t c = phi.dim(0), h = phi.dim(1), w = phi.dim(2);
  Tensor gray({h, w});
  for (std::size_t ci = 0; ci < c; ++ci) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double v = phi.at(ci, y, x);
        gray[y * w + x] += mode == RenderMode::absolute ? std::abs(v) : v;
      }
    }
  }
  auto [lo_it, hi_it] = std::minmax_element(gray.values().begin(), gray.values().end());
  const double lo = *lo_it, hi = *hi_it;
  if (mode == RenderMode::absolute) {
    if (hi == lo) return Tensor::filled({h, w}, 0.5);
    for (double& v : gray.values()) v = (v - lo) / (hi - lo);
  } else {
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (scale == 0.0) return Tensor::filled({h, w}, 0.5);
    for (double& v : gray.values()) v = 0.5 + 0.5 * v / scale;
  }
  return gray;
}

}  // namespace lesion
