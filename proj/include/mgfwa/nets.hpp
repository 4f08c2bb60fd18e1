#ifndef MGFWA_NETS_HPP
#define MGFWA_NETS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgfwa/backend.hpp"

namespace mgfwa {

enum class Scale { kSmall, kMedium, kLarge };
enum class Activation { kRelu, kGelu };

std::string to_string(Scale scale);
std::string to_string(Activation activation);
Scale scale_from_string(const std::string& s);
Activation activation_from_string(const std::string& s);

/// One benchmark network configuration. `reported_params` keeps the
/// published figure; `param_count()` is the count the realized network
/// actually allocates (the two differ for nets 10-12, where no integer
/// hidden-layer count reproduces the published number).
struct NetSpec {
  int net_id = 0;
  Scale scale = Scale::kSmall;
  Activation activation = Activation::kRelu;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t output_dim = 1;
  std::size_t hidden_layers = 0;
  std::uint64_t reported_params = 0;
};

/// The 12 benchmark configurations.
const std::vector<NetSpec>& net_registry();

/// Registry row by id in 1..12; throws std::invalid_argument otherwise.
const NetSpec& net_spec(int net_id);

/// Weights and biases of L_h + 1 affine layers:
/// (D -> h), (L_h - 1) x (h -> h), (h -> 1).
std::uint64_t param_count(const NetSpec& spec);

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

/// tanh-form approximation, 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3))).
double gelu(double x);

/// Analytic test oracle: sum of squared coordinates, minimum 0 at the origin.
double sphere(std::span<const double> x);

/// Fixed-weight multilayer perceptron evaluated as a scalar black box.
/// Immutable after construction; forward() is safe to call concurrently.
class MlpBlackBox {
 public:
  struct Layer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights;  // out x in, row-major
    std::vector<double> bias;     // out
  };

  /// Samples every weight and bias uniformly in [-1/sqrt(fan_in),
  /// +1/sqrt(fan_in)], deterministically per (spec, weight_seed).
  MlpBlackBox(NetSpec spec, std::uint64_t weight_seed);

  /// Explicit layers, for hand-built test networks.
  MlpBlackBox(NetSpec spec, std::vector<Layer> layers);

  double forward(std::span<const double> x) const;

  const NetSpec& spec() const { return spec_; }
  std::uint64_t weight_seed() const { return weight_seed_; }
  const std::vector<Layer>& layers() const { return layers_; }

  /// Total allocated weight and bias entries.
  std::uint64_t allocated_params() const;

  /// Non-owning view; the network must outlive the returned objective.
  Objective objective() const;

 private:
  NetSpec spec_;
  std::uint64_t weight_seed_ = 0;
  std::vector<Layer> layers_;
};

inline MlpBlackBox build_net(const NetSpec& spec, std::uint64_t weight_seed) {
  return MlpBlackBox(spec, weight_seed);
}

/// Networks serialize as {spec fields, weight_seed}; weights regenerate
/// from the seed on load and are never written out.
nlohmann::json net_to_json(const MlpBlackBox& net);
MlpBlackBox net_from_json(const nlohmann::json& doc);

}  // namespace mgfwa

#endif  // MGFWA_NETS_HPP
