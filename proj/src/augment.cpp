#include "lesion/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lesion/error.hpp"
#include "lesion/rng.hpp"

namespace lesion {

void AugmentationPolicy::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(horizontal_flip_p) || !prob(vertical_flip_p)) {
    throw ConfigError("flip probabilities must lie in [0, 1]");
  }
  if (!(rotation_max_deg >= 0.0 && rotation_max_deg <= 180.0)) {
    throw ConfigError("rotation_max_deg must lie in [0, 180]");
  }
  if (!(resize_scale_min > 0.0 && resize_scale_min <= resize_scale_max && resize_scale_max <= 1.0)) {
    throw ConfigError("resize scale range must satisfy 0 < min <= max <= 1");
  }
  if (!(brightness_delta_max >= 0.0 && brightness_delta_max < 1.0) ||
      !(saturation_delta_max >= 0.0 && saturation_delta_max < 1.0)) {
    throw ConfigError("brightness and saturation deltas must lie in [0, 1)");
  }
}

AugmentationPolicy AugmentationPolicy::identity() {
  AugmentationPolicy p;
  p.rotation_max_deg = 0.0;
  p.horizontal_flip_p = 0.0;
  p.vertical_flip_p = 0.0;
  p.resize_scale_min = 1.0;
  p.resize_scale_max = 1.0;
  p.brightness_delta_max = 0.0;
  p.saturation_delta_max = 0.0;
  return p;
}

namespace {

// Reflection about the edge pixel centres: -1 -> 1, n -> n - 2.
long reflect(long i, long n) {
  if (n == 1) return 0;
  const long period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

double sample_bilinear(const Tensor& img, std::size_t c, double y, double x) {
  const long h = static_cast<long>(img.dim(1)), w = static_cast<long>(img.dim(2));
  const double fy = std::floor(y), fx = std::floor(x);
  const double ty = y - fy, tx = x - fx;
  const long y0 = static_cast<long>(fy), x0 = static_cast<long>(fx);
  auto px = [&](long yy, long xx) {
    return img.at(c, static_cast<std::size_t>(reflect(yy, h)), static_cast<std::size_t>(reflect(xx, w)));
  };
  const double top = px(y0, x0) * (1 - tx) + px(y0, x0 + 1) * tx;
  const double bottom = px(y0 + 1, x0) * (1 - tx) + px(y0 + 1, x0 + 1) * tx;
  return top * (1 - ty) + bottom * ty;
}

}  // namespace

Tensor flip_horizontal(const Tensor& image) {
  Tensor out(image.shape());
  const std::size_t c = image.dim(0), h = image.dim(1), w = image.dim(2);
  for (std::size_t ci = 0; ci < c; ++ci)
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) out.at(ci, y, x) = image.at(ci, y, w - 1 - x);
  return out;
}

Tensor flip_vertical(const Tensor& image) {
  Tensor out(image.shape());
  const std::size_t c = image.dim(0), h = image.dim(1), w = image.dim(2);
  for (std::size_t ci = 0; ci < c; ++ci)
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) out.at(ci, y, x) = image.at(ci, h - 1 - y, x);
  return out;
}

Tensor rotate(const Tensor& image, double degrees) {
  if (degrees == 0.0) return image;
  const double theta = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(theta), sn = std::sin(theta);
  const std::size_t c = image.dim(0), h = image.dim(1), w = image.dim(2);
  const double cy = (h - 1) / 2.0, cx = (w - 1) / 2.0;
  Tensor out(image.shape());
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      // Inverse mapping: output pixel -> source location.
      const double dy = y - cy, dx = x - cx;
      const double sy = cy + cs * dy - sn * dx;
      const double sx = cx + sn * dy + cs * dx;
      for (std::size_t ci = 0; ci < c; ++ci) out.at(ci, y, x) = sample_bilinear(image, ci, sy, sx);
    }
  }
  return out;
}

Tensor crop_resize(const Tensor& image, double scale, double oy, double ox) {
  if (scale == 1.0) return image;
  const std::size_t c = image.dim(0), h = image.dim(1), w = image.dim(2);
  const double ch = scale * h, cw = scale * w;
  const double top = oy * (h - ch), left = ox * (w - cw);
  Tensor out(image.shape());
  for (std::size_t y = 0; y < h; ++y) {
    const double sy = top + (y + 0.5) * ch / h - 0.5;
    for (std::size_t x = 0; x < w; ++x) {
      const double sx = left + (x + 0.5) * cw / w - 0.5;
      for (std::size_t ci = 0; ci < c; ++ci) out.at(ci, y, x) = sample_bilinear(image, ci, sy, sx);
    }
  }
  return out;
}

Tensor adjust_saturation(const Tensor& image, double factor) {
  if (factor == 1.0) return image;
  Tensor out = image;
  const std::size_t h = image.dim(1), w = image.dim(2);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double r = image.at(0, y, x), g = image.at(1, y, x), b = image.at(2, y, x);
      const double v = std::max({r, g, b});
      const double mn = std::min({r, g, b});
      if (v <= 0.0 || v == mn) continue;  // grey pixels have no saturation to scale
      const double s = (v - mn) / v;
      const double s2 = std::clamp(s * factor, 0.0, 1.0);
      // Scaling S at fixed H and V moves each channel along its line to V.
      const double k = s2 / s;
      out.at(0, y, x) = v - (v - r) * k;
      out.at(1, y, x) = v - (v - g) * k;
      out.at(2, y, x) = v - (v - b) * k;
    }
  }
  return out;
}

Sample augment(const Sample& sample, const AugmentationPolicy& policy, std::uint64_t epoch_nonce) {
  policy.validate();
  Rng rng(derive_seed({policy.seed, hash_string(sample.id), epoch_nonce}));
  // All draws happen unconditionally so the stream layout never shifts.
  const double angle = rng.uniform(-policy.rotation_max_deg, policy.rotation_max_deg);
  const double scale = rng.uniform(policy.resize_scale_min, policy.resize_scale_max);
  const double oy = rng.uniform(), ox = rng.uniform();
  const bool hflip = rng.bernoulli(policy.horizontal_flip_p);
  const bool vflip = rng.bernoulli(policy.vertical_flip_p);
  const double brightness = rng.uniform(-policy.brightness_delta_max, policy.brightness_delta_max);
  const double saturation = 1.0 + rng.uniform(-policy.saturation_delta_max, policy.saturation_delta_max);

  Sample out = sample;
  Tensor img = rotate(sample.image, angle);
  img = crop_resize(img, scale, oy, ox);
  if (hflip) img = flip_horizontal(img);
  if (vflip) img = flip_vertical(img);
  if (brightness != 0.0) {
    for (double& v : img.values()) v += brightness;
  }
  img = adjust_saturation(img, saturation);
  for (double& v : img.values()) v = std::clamp(v, 0.0, 1.0);
  out.image = std::move(img);
  return out;
}

}  // namespace lesion
