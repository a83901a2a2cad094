#include "lesion/model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "lesion/error.hpp"
#include "lesion/sample.hpp"
#include "lesion/transfer.hpp"

namespace lesion {

const char* to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::conv2d: return "conv2d";
    case LayerKind::max_pool2d: return "max_pool2d";
    case LayerKind::relu: return "relu";
    case LayerKind::flatten: return "flatten";
    case LayerKind::dropout: return "dropout";
    case LayerKind::linear: return "linear";
  }
  return "?";
}

LayerKind parse_layer_kind(const std::string& text) {
  for (LayerKind k : {LayerKind::conv2d, LayerKind::max_pool2d, LayerKind::relu,
                      LayerKind::flatten, LayerKind::dropout, LayerKind::linear}) {
    if (text == to_string(k)) return k;
  }
  throw SpecError("unknown layer type '" + text + "'");
}

Shape LayerDesc::weight_shape() const {
  if (kind == LayerKind::conv2d) return {out_channels, in_channels, kernel, kernel};
  if (kind == LayerKind::linear) return {out_features, in_features};
  throw ContractError(std::string("layer '") + name + "' has no weight");
}

Shape LayerDesc::bias_shape() const {
  if (kind == LayerKind::conv2d) return {out_channels};
  if (kind == LayerKind::linear) return {out_features};
  throw ContractError(std::string("layer '") + name + "' has no bias");
}

namespace {

Shape walk(const std::vector<LayerDesc>& layers, Shape shape, const char* branch) {
  for (const LayerDesc& layer : layers) {
    const std::string where = std::string(branch) + " layer '" + layer.name + "'";
    switch (layer.kind) {
      case LayerKind::conv2d: {
        if (shape.size() != 3) throw SpecError(where + ": conv2d needs a [C,H,W] input, got " + to_string(shape));
        if (layer.in_channels != shape[0]) {
          throw SpecError(where + ": declares " + std::to_string(layer.in_channels) +
                          " input channels but receives " + std::to_string(shape[0]));
        }
        if (layer.kernel == 0 || layer.stride == 0 || layer.out_channels == 0) {
          throw SpecError(where + ": kernel, stride and out_channels must be positive");
        }
        const std::size_t hp = shape[1] + 2 * layer.padding, wp = shape[2] + 2 * layer.padding;
        if (layer.kernel > hp || layer.kernel > wp) {
          throw SpecError(where + ": kernel " + std::to_string(layer.kernel) +
                          " exceeds padded input " + to_string(shape));
        }
        shape = {layer.out_channels, (hp - layer.kernel) / layer.stride + 1,
                 (wp - layer.kernel) / layer.stride + 1};
        break;
      }
      case LayerKind::max_pool2d:
        if (shape.size() != 3) throw SpecError(where + ": max_pool2d needs a [C,H,W] input");
        if (layer.window == 0 || layer.window > shape[1] || layer.window > shape[2]) {
          throw SpecError(where + ": window " + std::to_string(layer.window) +
                          " does not fit input " + to_string(shape));
        }
        shape = {shape[0], shape[1] / layer.window, shape[2] / layer.window};
        break;
      case LayerKind::relu:
        break;
      case LayerKind::flatten:
        shape = {numel(shape)};
        break;
      case LayerKind::dropout:
        if (!(layer.rate >= 0.0 && layer.rate < 1.0)) {
          throw SpecError(where + ": dropout rate must lie in [0, 1)");
        }
        break;
      case LayerKind::linear:
        if (shape.size() != 1) throw SpecError(where + ": linear needs a flat input, got " + to_string(shape));
        if (layer.in_features != shape[0]) {
          throw SpecError(where + ": declares " + std::to_string(layer.in_features) +
                          " inputs but receives " + std::to_string(shape[0]));
        }
        if (layer.out_features == 0) throw SpecError(where + ": out_features must be positive");
        shape = {layer.out_features};
        break;
    }
  }
  return shape;
}

}  // namespace

std::size_t ModelSpec::image_output_width() const {
  const Shape out = walk(image_branch, {input_shape[0], input_shape[1], input_shape[2]}, "image");
  if (out.size() != 1) throw SpecError("image branch must end flat, ends at " + to_string(out));
  return out[0];
}

std::size_t ModelSpec::static_output_width() const {
  if (static_branch.empty()) return 0;
  const Shape out = walk(static_branch, {static_dim}, "static");
  if (out.size() != 1) throw SpecError("static branch must end flat, ends at " + to_string(out));
  return out[0];
}

void ModelSpec::validate() const {
  if (input_shape[0] != 3 || input_shape[1] == 0 || input_shape[2] == 0) {
    throw SpecError("input image shape must be [3, H, W] with H, W > 0");
  }
  if (static_dim != kStaticDim) {
    throw SpecError("static_dim must be 3 (age, sex, site), got " + std::to_string(static_dim));
  }
  std::set<std::string> names;
  auto check_name = [&](const LayerDesc& layer) {
    if (layer.name.empty()) throw SpecError("every layer needs a name");
    if (!names.insert(layer.name).second) throw SpecError("duplicate layer name '" + layer.name + "'");
  };
  for (const LayerDesc& l : image_branch) check_name(l);
  for (const LayerDesc& l : static_branch) {
    check_name(l);
    if (l.kind == LayerKind::conv2d || l.kind == LayerKind::max_pool2d) {
      throw SpecError("static branch layer '" + l.name + "' must not be spatial");
    }
  }
  check_name(head);
  if (head.kind != LayerKind::linear || head.out_features != 1) {
    throw SpecError("head '" + head.name + "' must be a linear layer with one output");
  }
  const std::size_t image_width = image_output_width();
  const std::size_t static_width = static_output_width();
  if (head.in_features != image_width + static_width) {
    throw SpecError("head '" + head.name + "' expects " + std::to_string(head.in_features) +
                    " inputs but branches provide " + std::to_string(image_width) + " + " +
                    std::to_string(static_width) + " = " +
                    std::to_string(image_width + static_width));
  }
}

std::vector<const LayerDesc*> ModelSpec::parameter_layers() const {
  std::vector<const LayerDesc*> out;
  for (const LayerDesc& l : image_branch) if (l.has_parameters()) out.push_back(&l);
  for (const LayerDesc& l : static_branch) if (l.has_parameters()) out.push_back(&l);
  out.push_back(&head);
  return out;
}

void StandardCnnConfig::validate() const {
  auto in_range = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (!in_range(num_conv_layers, 5, 10)) throw ConfigError("num_conv_layers must lie in [5, 10]");
  if (!in_range(kernel_size, 2, 5)) throw ConfigError("kernel_size must lie in [2, 5]");
  if (!in_range(pool_size, 3, 4)) throw ConfigError("pool_size must lie in [3, 4]");
  if (!in_range(filters_per_layer, 6, 12)) throw ConfigError("filters_per_layer must lie in [6, 12]");
  if (!in_range(dropout, 0.0, 0.5)) throw ConfigError("dropout must lie in [0, 0.5]");
}

ModelSpec standard_cnn_spec(const StandardCnnConfig& config, std::size_t height, std::size_t width) {
  config.validate();
  ModelSpec spec;
  spec.input_shape = {3, height, width};
  std::size_t channels = 3;
  for (std::size_t i = 1; i <= config.num_conv_layers; ++i) {
    LayerDesc conv;
    conv.name = "conv" + std::to_string(i);
    conv.kind = LayerKind::conv2d;
    conv.in_channels = channels;
    conv.out_channels = config.filters_per_layer;
    conv.kernel = config.kernel_size;
    conv.padding = config.kernel_size / 2;
    spec.image_branch.push_back(conv);
    spec.image_branch.push_back({.name = "relu" + std::to_string(i), .kind = LayerKind::relu});
    if (i <= 2) {
      LayerDesc pool{.name = "pool" + std::to_string(i), .kind = LayerKind::max_pool2d};
      pool.window = config.pool_size;
      spec.image_branch.push_back(pool);
    }
    channels = config.filters_per_layer;
  }
  spec.image_branch.push_back({.name = "flatten", .kind = LayerKind::flatten});
  LayerDesc drop{.name = "dropout", .kind = LayerKind::dropout};
  drop.rate = config.dropout;
  spec.image_branch.push_back(drop);
  // Width of the flattened conv output, known only after walking the convs.
  LayerDesc fc{.name = "fc_image", .kind = LayerKind::linear};
  fc.in_features = 0;
  fc.out_features = kImageFeatureWidth;
  std::vector<LayerDesc> trunk(spec.image_branch.begin(), spec.image_branch.end() - 2);
  Shape conv_out = walk(trunk, {3, height, width}, "image");
  fc.in_features = numel(conv_out);
  spec.image_branch.push_back(fc);
  spec.image_branch.push_back({.name = "relu_image", .kind = LayerKind::relu});

  LayerDesc st{.name = "fc_static", .kind = LayerKind::linear};
  st.in_features = kStaticDim;
  st.out_features = kStaticHiddenWidth;
  spec.static_branch.push_back(st);
  spec.static_branch.push_back({.name = "relu_static", .kind = LayerKind::relu});

  spec.head = LayerDesc{.name = "head", .kind = LayerKind::linear};
  spec.head.in_features = kImageFeatureWidth + kStaticHiddenWidth;
  spec.head.out_features = 1;
  spec.validate();
  return spec;
}

std::vector<std::pair<std::string, Shape>> parameter_shapes(const ModelSpec& spec) {
  std::vector<std::pair<std::string, Shape>> out;
  for (const LayerDesc* layer : spec.parameter_layers()) {
    out.emplace_back(layer->name + ".weight", layer->weight_shape());
    out.emplace_back(layer->name + ".bias", layer->bias_shape());
  }
  return out;
}

Model::Model(ModelSpec spec, std::vector<Parameter> parameters)
    : spec_(std::move(spec)), parameters_(std::move(parameters)) {
  spec_.validate();
  const auto expected = parameter_shapes(spec_);
  if (expected.size() != parameters_.size()) {
    throw SpecError("model expects " + std::to_string(expected.size()) + " parameter tensors, got " +
                    std::to_string(parameters_.size()));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (parameters_[i].name != expected[i].first || parameters_[i].value.shape() != expected[i].second) {
      throw SpecError("parameter " + std::to_string(i) + " should be " + expected[i].first + " " +
                      to_string(expected[i].second) + ", got " + parameters_[i].name + " " +
                      to_string(parameters_[i].value.shape()));
    }
  }
}

std::optional<std::size_t> Model::parameter_index(const std::string& name) const {
  for (std::size_t i = 0; i < parameters_.size(); ++i) {
    if (parameters_[i].name == name) return i;
  }
  return std::nullopt;
}

const Tensor& Model::parameter(const std::string& name) const {
  const auto idx = parameter_index(name);
  if (!idx) throw ContractError("model has no parameter '" + name + "'");
  return parameters_[*idx].value;
}

Tensor& Model::parameter(const std::string& name) {
  const auto idx = parameter_index(name);
  if (!idx) throw ContractError("model has no parameter '" + name + "'");
  return parameters_[*idx].value;
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const Parameter& p : parameters_) n += p.value.size();
  return n;
}

Model build(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<Parameter> params;
  for (const LayerDesc* layer : spec.parameter_layers()) {
    params.push_back({layer->name + ".weight", kaiming_init(layer->weight_shape(), layer_seed(seed, layer->name))});
    params.push_back({layer->name + ".bias", Tensor(layer->bias_shape())});
  }
  return Model(spec, std::move(params));
}

BoundParameters bind(const Model& model, Tape& tape, bool requires_grad) {
  BoundParameters bound;
  bound.vars.reserve(model.parameters().size());
  for (const Parameter& p : model.parameters()) bound.vars.push_back(tape.leaf(p.value, requires_grad));
  return bound;
}

namespace {

Var run_branch(const std::vector<LayerDesc>& layers, const BoundParameters& params,
               std::size_t& next_param, Var x, bool train_mode, Rng* rng) {
  for (const LayerDesc& layer : layers) {
    switch (layer.kind) {
      case LayerKind::conv2d:
        x = conv2d(x, params.vars[next_param], params.vars[next_param + 1], layer.stride, layer.padding);
        next_param += 2;
        break;
      case LayerKind::linear:
        x = linear(x, params.vars[next_param], params.vars[next_param + 1]);
        next_param += 2;
        break;
      case LayerKind::max_pool2d: x = max_pool2d(x, layer.window); break;
      case LayerKind::relu: x = relu(x); break;
      case LayerKind::flatten: x = flatten(x); break;
      case LayerKind::dropout: x = dropout(x, layer.rate, train_mode, rng); break;
    }
  }
  return x;
}

}  // namespace

Var forward(const Model& model, const BoundParameters& params, Var image, Var static_features,
            bool train_mode, Rng* rng) {
  const ModelSpec& spec = model.spec();
  const Shape expected_image{spec.input_shape[0], spec.input_shape[1], spec.input_shape[2]};
  if (image.shape() != expected_image) {
    throw DimensionError("model expects image " + to_string(expected_image) + ", got " +
                         to_string(image.shape()));
  }
  if (static_features.shape() != Shape{spec.static_dim}) {
    throw DimensionError("model expects static features [" + std::to_string(spec.static_dim) +
                         "], got " + to_string(static_features.shape()));
  }
  if (params.vars.size() != model.parameters().size()) {
    throw ContractError("bound parameters do not belong to this model");
  }
  std::size_t next = 0;
  Var features = run_branch(spec.image_branch, params, next, image, train_mode, rng);
  if (!spec.static_branch.empty()) {
    Var s = run_branch(spec.static_branch, params, next, static_features, train_mode, rng);
    features = concat(features, s);
  }
  return linear(features, params.vars[next], params.vars[next + 1]);
}

Tensor forward(const Model& model, const Tensor& image, const Tensor& static_features,
               bool train_mode, Rng* rng) {
  Tape tape;
  const BoundParameters params = bind(model, tape, false);
  Var logit = forward(model, params, tape.leaf(image), tape.leaf(static_features), train_mode, rng);
  return logit.value();
}

Tensor static_tensor(const Sample& sample) {
  return Tensor({3}, {sample.static_features[0], sample.static_features[1], sample.static_features[2]});
}

std::vector<double> predict_proba(const Model& model, std::span<const Sample> samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const Sample& s : samples) {
    out.push_back(stable_sigmoid(forward(model, s.image, static_tensor(s), false).item()));
  }
  return out;
}

}  // namespace lesion
