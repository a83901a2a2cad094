#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lesion/sample.hpp"
#include "lesion/tensor.hpp"

namespace lesion {

// Body-site counts per class (benign, melanoma) used as sampling priors.
inline constexpr std::array<std::array<double, 6>, 2> kSiteCounts = {{
    {17106, 8293, 4872, 1781, 370, 120},
    {257, 124, 111, 74, 5, 4},
}};

// Two renderings of the same task. The source domain has a different skin
// palette and lesion size range, for pretraining before transfer.
enum class SynthDomain { target, source };

struct SynthOptions {
  std::size_t height = 24;
  std::size_t width = 24;
  SynthDomain domain = SynthDomain::target;
};

struct SynthRecord {
  Sample sample;
  Tensor mask;  // [H, W], 1 inside the lesion contour
};

// Benign lesions are smooth ellipses; melanomas have a ragged contour.
// Exactly round(n * positive_fraction) positives, images quantised to
// 8 bits, deterministic in seed.
std::vector<SynthRecord> synth_generate_records(std::size_t n, double positive_fraction,
                                                std::uint64_t seed, const SynthOptions& options = {});

std::vector<Sample> synth_generate(std::size_t n, double positive_fraction, std::uint64_t seed,
                                   const SynthOptions& options = {});

}  // namespace lesion
