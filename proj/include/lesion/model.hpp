#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lesion/ops.hpp"
#include "lesion/tape.hpp"
#include "lesion/tensor.hpp"

namespace lesion {

struct Sample;

enum class LayerKind { conv2d, max_pool2d, relu, flatten, dropout, linear };

const char* to_string(LayerKind kind);
LayerKind parse_layer_kind(const std::string& text);

// One entry of a branch. Only the fields of the layer's own kind are used.
struct LayerDesc {
  std::string name;
  LayerKind kind = LayerKind::relu;
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel = 0;
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::size_t window = 0;
  double rate = 0.0;
  std::size_t in_features = 0;
  std::size_t out_features = 0;

  bool has_parameters() const { return kind == LayerKind::conv2d || kind == LayerKind::linear; }
  Shape weight_shape() const;
  Shape bias_shape() const;

  friend bool operator==(const LayerDesc&, const LayerDesc&) = default;
};

// Two-branch fusion network: an image branch and a static-feature branch
// whose outputs are concatenated and fed to a single-logit head.
struct ModelSpec {
  std::array<std::size_t, 3> input_shape{3, 224, 224};
  std::size_t static_dim = 3;
  std::vector<LayerDesc> image_branch;
  // May be empty, in which case static features are not used.
  std::vector<LayerDesc> static_branch;
  LayerDesc head;

  // Throws SpecError (or DimensionError for shape walks that fail).
  void validate() const;
  std::size_t image_output_width() const;
  std::size_t static_output_width() const;
  // Parameter-bearing layers in canonical order: image, static, head.
  std::vector<const LayerDesc*> parameter_layers() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// The standard CNN's tunable knobs; defaults are the tuned values.
struct StandardCnnConfig {
  std::size_t num_conv_layers = 5;
  std::size_t kernel_size = 4;
  std::size_t pool_size = 3;
  std::size_t filters_per_layer = 11;
  double dropout = 0.4;

  // Throws ConfigError outside the searched ranges.
  void validate() const;
};

inline constexpr std::size_t kImageFeatureWidth = 64;
inline constexpr std::size_t kStaticHiddenWidth = 16;
inline constexpr std::size_t kStaticDim = 3;

// [conv -> relu] x N with max-pool after the first two convs, then
// flatten -> dropout -> linear(64) -> relu. Static branch linear(3->16) -> relu.
// Convs use padding kernel/2 so deep stacks never run out of spatial extent.
ModelSpec standard_cnn_spec(const StandardCnnConfig& config, std::size_t height,
                            std::size_t width);

struct Parameter {
  std::string name;  // "<layer>.weight" or "<layer>.bias"
  Tensor value;
};

class Model {
 public:
  Model(ModelSpec spec, std::vector<Parameter> parameters);

  const ModelSpec& spec() const { return spec_; }
  const std::vector<Parameter>& parameters() const { return parameters_; }
  std::vector<Parameter>& parameters() { return parameters_; }
  const Tensor& parameter(const std::string& name) const;
  Tensor& parameter(const std::string& name);
  std::optional<std::size_t> parameter_index(const std::string& name) const;
  std::size_t parameter_count() const;

 private:
  ModelSpec spec_;
  std::vector<Parameter> parameters_;
};

// Names and shapes of every parameter tensor the model spec implies, in order.
std::vector<std::pair<std::string, Shape>> parameter_shapes(const ModelSpec& spec);

// Kaiming-normal weights and zero biases, deterministic in seed.
Model build(const ModelSpec& spec, std::uint64_t seed);

// Parameters placed on a tape, aligned with Model::parameters().
struct BoundParameters {
  std::vector<Var> vars;
};

BoundParameters bind(const Model& model, Tape& tape, bool requires_grad);

// Graph-building forward pass returning the [1] logit.
Var forward(const Model& model, const BoundParameters& params, Var image, Var static_features,
            bool train_mode, Rng* rng);

// Standalone forward on a private tape.
Tensor forward(const Model& model, const Tensor& image, const Tensor& static_features,
               bool train_mode, Rng* rng = nullptr);

Tensor static_tensor(const Sample& sample);

// Eval-mode sigmoid outputs, one per sample, in input order.
std::vector<double> predict_proba(const Model& model, std::span<const Sample> samples);

}  // namespace lesion
