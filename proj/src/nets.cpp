#include "mgfwa/nets.hpp"

#include <cmath>
#include <stdexcept>

#include "mgfwa/rng.hpp"

namespace mgfwa {

std::string to_string(Scale scale) {
  switch (scale) {
    case Scale::kSmall: return "small";
    case Scale::kMedium: return "medium";
    case Scale::kLarge: return "large";
  }
  return "unknown";
}

std::string to_string(Activation activation) {
  return activation == Activation::kRelu ? "relu" : "gelu";
}

Scale scale_from_string(const std::string& s) {
  if (s == "small") return Scale::kSmall;
  if (s == "medium") return Scale::kMedium;
  if (s == "large") return Scale::kLarge;
  throw std::invalid_argument("unknown scale: " + s);
}

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "gelu") return Activation::kGelu;
  throw std::invalid_argument("unknown activation: " + s);
}

const std::vector<NetSpec>& net_registry() {
  // Hidden-layer counts are solved from the published parameter totals;
  // for nets 10-12 no integer count reaches the published figure, so the
  // registry keeps the nearest realizable network and reports both numbers.
  static const std::vector<NetSpec> registry = {
      {1, Scale::kSmall, Activation::kRelu, 10, 16, 1, 2, 465},
      {2, Scale::kSmall, Activation::kGelu, 10, 32, 1, 5, 4609},
      {3, Scale::kSmall, Activation::kRelu, 20, 16, 1, 5, 1441},
      {4, Scale::kSmall, Activation::kGelu, 20, 32, 1, 5, 4929},
      {5, Scale::kMedium, Activation::kRelu, 100, 64, 1, 8, 35649},
      {6, Scale::kMedium, Activation::kGelu, 100, 128, 1, 8, 128641},
      {7, Scale::kMedium, Activation::kRelu, 200, 64, 1, 8, 42049},
      {8, Scale::kMedium, Activation::kGelu, 200, 128, 1, 8, 141441},
      {9, Scale::kLarge, Activation::kRelu, 1000, 256, 1, 11, 914433},
      {10, Scale::kLarge, Activation::kGelu, 1000, 512, 1, 11, 3137585},
      {11, Scale::kLarge, Activation::kRelu, 2000, 256, 1, 11, 1173433},
      {12, Scale::kLarge, Activation::kGelu, 2000, 512, 1, 11, 3657585},
  };
  return registry;
}

const NetSpec& net_spec(int net_id) {
  if (net_id < 1 || net_id > 12) {
    throw std::invalid_argument("net id must be in 1..12");
  }
  return net_registry()[static_cast<std::size_t>(net_id - 1)];
}

std::uint64_t param_count(const NetSpec& spec) {
  if (spec.hidden_layers == 0) {
    throw std::invalid_argument("param_count: at least one hidden layer");
  }
  const std::uint64_t d = spec.input_dim;
  const std::uint64_t h = spec.hidden_dim;
  const std::uint64_t lh = spec.hidden_layers;
  return (d * h + h) + (lh - 1) * (h * h + h) + (h + 1);
}

double gelu(double x) {
  constexpr double kSqrt2OverPi = 0.7978845608028654;
  const double inner = kSqrt2OverPi * (x + 0.044715 * x * x * x);
  return 0.5 * x * (1.0 + std::tanh(inner));
}

double sphere(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

namespace {

MlpBlackBox::Layer sampled_layer(std::size_t in, std::size_t out,
                                 std::size_t layer_index,
                                 std::uint64_t weight_seed) {
  MlpBlackBox::Layer layer;
  layer.in = in;
  layer.out = out;
  layer.weights.resize(in * out);
  layer.bias.resize(out);
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  for (std::size_t o = 0; o < out; ++o) {
    for (std::size_t i = 0; i < in; ++i) {
      const RngKey key{weight_seed, RngStream::kWeights, layer_index, 1, o, 0, i};
      layer.weights[o * in + i] = uniform_sample(key, -bound, bound);
    }
    const RngKey key{weight_seed, RngStream::kWeights, layer_index, 0, o, 0, 0};
    layer.bias[o] = uniform_sample(key, -bound, bound);
  }
  return layer;
}

}  // namespace

MlpBlackBox::MlpBlackBox(NetSpec spec, std::uint64_t weight_seed)
    : spec_(spec), weight_seed_(weight_seed) {
  if (spec.input_dim == 0 || spec.hidden_dim == 0 || spec.output_dim != 1 ||
      spec.hidden_layers == 0) {
    throw std::invalid_argument("MlpBlackBox: invalid spec");
  }
  layers_.reserve(spec.hidden_layers + 1);
  layers_.push_back(sampled_layer(spec.input_dim, spec.hidden_dim, 0, weight_seed));
  for (std::size_t l = 1; l < spec.hidden_layers; ++l) {
    layers_.push_back(sampled_layer(spec.hidden_dim, spec.hidden_dim, l, weight_seed));
  }
  layers_.push_back(
      sampled_layer(spec.hidden_dim, spec.output_dim, spec.hidden_layers, weight_seed));
}

MlpBlackBox::MlpBlackBox(NetSpec spec, std::vector<Layer> layers)
    : spec_(spec), layers_(std::move(layers)) {
  if (layers_.empty()) {
    throw std::invalid_argument("MlpBlackBox: needs at least one layer");
  }
  for (const Layer& layer : layers_) {
    if (layer.weights.size() != layer.in * layer.out ||
        layer.bias.size() != layer.out) {
      throw std::invalid_argument("MlpBlackBox: layer shape mismatch");
    }
  }
}

double MlpBlackBox::forward(std::span<const double> x) const {
  if (x.size() != layers_.front().in) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  // Per-thread scratch keeps the hot path allocation-free; each OpenMP
  // worker owns its own pair.
  thread_local std::vector<double> cur;
  thread_local std::vector<double> next;
  cur.assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    const bool last = l + 1 == layers_.size();
    next.assign(layer.out, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      // Fixed ascending-index accumulation keeps results bit-identical
      // across backends and worker counts.
      double acc = layer.bias[o];
      const double* w = layer.weights.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) {
        acc += w[i] * cur[i];
      }
      if (!last) {
        acc = spec_.activation == Activation::kRelu ? relu(acc) : gelu(acc);
      }
      next[o] = acc;
    }
    cur.swap(next);
  }
  return cur[0];
}

std::uint64_t MlpBlackBox::allocated_params() const {
  std::uint64_t total = 0;
  for (const Layer& layer : layers_) {
    total += layer.weights.size() + layer.bias.size();
  }
  return total;
}

Objective MlpBlackBox::objective() const {
  return [this](std::span<const double> x) { return forward(x); };
}

nlohmann::json net_to_json(const MlpBlackBox& net) {
  const NetSpec& spec = net.spec();
  return nlohmann::json{
      {"net_id", spec.net_id},
      {"scale", to_string(spec.scale)},
      {"activation", to_string(spec.activation)},
      {"input_dim", spec.input_dim},
      {"hidden_dim", spec.hidden_dim},
      {"output_dim", spec.output_dim},
      {"hidden_layers", spec.hidden_layers},
      {"reported_params", spec.reported_params},
      {"weight_seed", net.weight_seed()},
  };
}

MlpBlackBox net_from_json(const nlohmann::json& doc) {
  NetSpec spec;
  spec.net_id = doc.at("net_id").get<int>();
  spec.scale = scale_from_string(doc.at("scale").get<std::string>());
  spec.activation = activation_from_string(doc.at("activation").get<std::string>());
  spec.input_dim = doc.at("input_dim").get<std::size_t>();
  spec.hidden_dim = doc.at("hidden_dim").get<std::size_t>();
  spec.output_dim = doc.at("output_dim").get<std::size_t>();
  spec.hidden_layers = doc.at("hidden_layers").get<std::size_t>();
  spec.reported_params = doc.at("reported_params").get<std::uint64_t>();
  return MlpBlackBox(spec, doc.at("weight_seed").get<std::uint64_t>());
}

}  // namespace mgfwa
