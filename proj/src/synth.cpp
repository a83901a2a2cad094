#include "lesion/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "lesion/dataset.hpp"
#include "lesion/error.hpp"
#include "lesion/image_io.hpp"
#include "lesion/rng.hpp"

namespace lesion {

namespace {

constexpr double kPi = std::numbers::pi;

struct Palette {
  std::array<double, 3> skin;
  std::array<double, 3> lesion;
  double radius_min;
  double radius_max;
};

Palette palette(SynthDomain domain) {
  if (domain == SynthDomain::source) {
    return {{0.62, 0.47, 0.38}, {0.30, 0.17, 0.15}, 0.18, 0.34};
  }
  return {{0.88, 0.70, 0.60}, {0.45, 0.30, 0.22}, 0.22, 0.32};
}

std::size_t draw_site(Rng& rng, int label) {
  const auto& counts = kSiteCounts[static_cast<std::size_t>(label)];
  double total = 0.0;
  for (double c : counts) total += c;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (u < counts[i]) return i;
    u -= counts[i];
  }
  return counts.size() - 1;
}

SynthRecord render(std::size_t index, int label, std::uint64_t seed, const SynthOptions& opt) {
  Rng rng(derive_seed({seed, static_cast<std::uint64_t>(index), 0x5717ULL}));
  const Palette pal = palette(opt.domain);
  const std::size_t h = opt.height, w = opt.width;
  const double size = static_cast<double>(std::min(h, w));

  // Static features.
  const double age = std::clamp(std::round(label ? 57.0 + 15.0 * rng.normal() : 47.0 + 16.0 * rng.normal()), 1.0, 99.0);
  const bool male = rng.bernoulli(label ? 0.58 : 0.48);
  const std::size_t site = draw_site(rng, label);

  // Background.
  std::array<double, 3> skin{};
  const double tone = rng.uniform(-0.06, 0.06);
  for (std::size_t c = 0; c < 3; ++c) skin[c] = pal.skin[c] + tone + rng.uniform(-0.02, 0.02);
  const double light_dir = rng.uniform(0.0, 2 * kPi);
  const double light_amp = rng.uniform(0.0, 0.06);

  // Lesion geometry.
  const double cy = (h - 1) / 2.0 + rng.uniform(-0.08, 0.08) * size;
  const double cx = (w - 1) / 2.0 + rng.uniform(-0.08, 0.08) * size;
  const double radius = rng.uniform(pal.radius_min, pal.radius_max) * size;
  const double aspect = rng.uniform(0.75, 1.0);
  const double orient = rng.uniform(0.0, kPi);
  std::array<double, 12> amp{}, phase{};
  if (label) {
    const double roughness = rng.uniform(0.04, 0.12);
    for (std::size_t k = 5; k <= 11; ++k) amp[k] = roughness * rng.uniform(0.5, 1.5) / 3.0;
  } else {
    for (std::size_t k = 2; k <= 3; ++k) amp[k] = rng.uniform(0.0, 0.04);
  }
  for (double& p : phase) p = rng.uniform(0.0, 2 * kPi);

  std::array<double, 3> lesion{};
  const double darkness = rng.uniform(0.8, 1.1);
  for (std::size_t c = 0; c < 3; ++c) lesion[c] = pal.lesion[c] * darkness;
  const double asym = rng.uniform(0.0, 0.05);
  const double asym_dir = rng.uniform(0.0, 2 * kPi);

  SynthRecord rec;
  rec.sample.id = "synth_" + std::string(opt.domain == SynthDomain::source ? "s" : "t");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  rec.sample.id += buf;
  rec.sample.label = label;
  rec.sample.static_features = encode_static(age, male ? "male" : "female", kSites[site]);
  rec.sample.image = Tensor({3, h, w});
  rec.mask = Tensor({h, w});

  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double dy = y - cy, dx = x - cx;
      const double rho = std::hypot(dy, dx);
      const double theta = std::atan2(dy, dx);
      // Ellipse radius along theta, then contour perturbation.
      const double a = theta - orient;
      const double ell = radius * aspect / std::sqrt(std::pow(aspect * std::cos(a), 2) + std::pow(std::sin(a), 2));
      double wobble = 1.0;
      for (std::size_t k = 2; k < amp.size(); ++k) wobble += amp[k] * std::cos(k * theta + phase[k]);
      const double edge = ell * wobble;
      const double alpha = std::clamp(edge - rho + 0.5, 0.0, 1.0);
      rec.mask[y * w + x] = rho < edge ? 1.0 : 0.0;

      const double shade = 0.85 + 0.15 * std::min(rho / std::max(edge, 1e-9), 1.0);
      const double side = 1.0 - asym * std::max(0.0, std::cos(theta - asym_dir));
      const double light = 1.0 + light_amp * ((dx * std::cos(light_dir) + dy * std::sin(light_dir)) / size);
      for (std::size_t c = 0; c < 3; ++c) {
        const double lv = lesion[c] * shade * side;
        const double v = (skin[c] * (1.0 - alpha) + lv * alpha) * light + 0.015 * rng.normal();
        rec.sample.image.at(c, y, x) = std::clamp(v, 0.0, 1.0);
      }
    }
  }
  rec.sample.image = quantize_8bit(std::move(rec.sample.image));
  return rec;
}

}  // namespace

std::vector<SynthRecord> synth_generate_records(std::size_t n, double positive_fraction,
                                                std::uint64_t seed, const SynthOptions& options) {
  if (n < 10) throw ConfigError("synthetic dataset needs n >= 10");
  if (!(positive_fraction > 0.0 && positive_fraction < 1.0)) {
    throw ConfigError("positive_fraction must lie in (0, 1)");
  }
  if (options.height < 8 || options.width < 8) throw ConfigError("synthetic images need at least 8x8 pixels");
  const auto positives = static_cast<std::size_t>(std::llround(n * positive_fraction));
  std::vector<int> labels(n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(positives), 1);
  Rng shuffle(derive_seed({seed, 0x1abe1ULL}));
  for (std::size_t i = n - 1; i > 0; --i) std::swap(labels[i], labels[shuffle.below(i + 1)]);

  std::vector<SynthRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(render(i, labels[i], seed, options));
  return out;
}

std::vector<Sample> synth_generate(std::size_t n, double positive_fraction, std::uint64_t seed,
                                   const SynthOptions& options) {
  std::vector<Sample> out;
  out.reserve(n);
  for (SynthRecord& r : synth_generate_records(n, positive_fraction, seed, options)) {
    out.push_back(std::move(r.sample));
  }
  return out;
}

}  // namespace lesion
