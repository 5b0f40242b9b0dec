#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vic/control/controllers.hpp"
#include "vic/learn/mlp.hpp"
#include "vic/learn/trainer.hpp"

namespace vic {

inline constexpr char kCheckpointMagic[8] = {'V', 'I', 'C', 'P', 'O', 'L', 'C', 'Y'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Everything in a checkpoint except the network parameters.
struct CheckpointHeader {
  std::uint32_t version = kCheckpointVersion;
  std::string env_id;
  Parametrization parametrization = Parametrization::kTorque;
  ActionCodec codec;
  Eigen::VectorXd obs_offset;
  Eigen::VectorXd obs_scale;
  std::vector<int> layer_sizes;
  Activation hidden = Activation::kTanh;
  Activation output = Activation::kTanh;
  std::uint64_t seed = 0;
};

CheckpointHeader header_of(const Policy& policy);

/// Byte-exact encoding of a policy (see FORMATS.md for the layout).
std::string encode_checkpoint(const Policy& policy);
/// Throws FormatError ("unrecognized format" for a bad magic) on any malformed input.
Policy decode_checkpoint(const std::string& bytes);
CheckpointHeader decode_checkpoint_header(const std::string& bytes);

void save_checkpoint(const Policy& policy, const std::string& path);
Policy load_checkpoint(const std::string& path);

/// Throws MismatchError when the policy was trained for a different environment,
/// parametrization or action/observation layout.
void check_compatible(const Policy& policy, std::string_view env_id,
                      const ActionCodec& codec, int observation_dim);

}  // namespace vic
