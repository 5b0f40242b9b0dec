#include "vic/io/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "vic/error.hpp"

namespace vic {
namespace {

std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void bytes(const char* p, std::size_t n) { out_.append(p, n); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void vec(const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v[i]);
  }
  std::string& data() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}

  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw FormatError("checkpoint truncated");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str(std::size_t max_len = 256) {
    const std::uint32_t n = u32();
    if (n > max_len) throw FormatError("checkpoint string field too long");
    need(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  Eigen::VectorXd vec(std::size_t n) {
    need(8 * n);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = f64();
    return v;
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::string& in_;
  std::size_t pos_ = 0;
};

Activation activation_from(std::uint8_t v) {
  if (v > 1) throw FormatError(fmt::format("checkpoint has unknown activation {}", v));
  return static_cast<Activation>(v);
}

Parametrization parametrization_from(std::uint8_t v) {
  if (v > 2) throw FormatError(fmt::format("checkpoint has unknown parametrization {}", v));
  return static_cast<Parametrization>(v);
}

CheckpointHeader read_header(Reader& r) {
  char magic[8];
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (std::memcmp(magic, kCheckpointMagic, 8) != 0) {
    throw FormatError("unrecognized format: bad checkpoint magic");
  }
  CheckpointHeader h;
  h.version = r.u32();
  if (h.version != kCheckpointVersion) {
    throw FormatError(fmt::format("unsupported checkpoint version {} (expected {})", h.version,
                                  kCheckpointVersion));
  }
  h.env_id = r.str();
  h.parametrization = parametrization_from(r.u8());
  const std::uint32_t n = r.u32();
  if (n == 0 || n > 64) throw FormatError("checkpoint joint count out of range");
  h.codec.parametrization = h.parametrization;
  h.codec.torque_limits = r.vec(n);
  h.codec.position_lower = r.vec(n);
  h.codec.position_upper = r.vec(n);
  h.codec.kp_min = r.f64();
  h.codec.kp_max = r.f64();
  const std::uint32_t obs_dim = r.u32();
  if (obs_dim == 0 || obs_dim > 4096) throw FormatError("checkpoint observation size out of range");
  h.obs_offset = r.vec(obs_dim);
  h.obs_scale = r.vec(obs_dim);
  h.hidden = activation_from(r.u8());
  h.output = activation_from(r.u8());
  const std::uint32_t layers = r.u32();
  if (layers < 2 || layers > 64) throw FormatError("checkpoint layer count out of range");
  for (std::uint32_t i = 0; i < layers; ++i) {
    const std::uint32_t s = r.u32();
    if (s == 0 || s > 65536) throw FormatError("checkpoint layer size out of range");
    h.layer_sizes.push_back(static_cast<int>(s));
  }
  h.seed = r.u64();
  if (h.layer_sizes.front() != static_cast<int>(obs_dim)) {
    throw FormatError("checkpoint network input does not match the observation size");
  }
  if (h.layer_sizes.back() != h.codec.action_dim()) {
    throw FormatError("checkpoint network output does not match the action size");
  }
  return h;
}

void check_trailer(const std::string& bytes) {
  if (bytes.size() < 16) throw FormatError("unrecognized format: file too short");
  const std::size_t body = bytes.size() - 8;
  std::uint64_t stored = 0;
  for (int i = 0; i < 8; ++i) {
    stored |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[body + i])) << (8 * i);
  }
  if (stored != fnv1a(bytes.data(), body)) throw FormatError("checkpoint checksum mismatch");
}

}  // namespace

CheckpointHeader header_of(const Policy& policy) {
  CheckpointHeader h;
  h.env_id = policy.env_id;
  h.parametrization = policy.codec.parametrization;
  h.codec = policy.codec;
  h.obs_offset = policy.obs_offset;
  h.obs_scale = policy.obs_scale;
  h.layer_sizes = policy.actor.sizes();
  h.hidden = policy.actor.hidden_activation();
  h.output = policy.actor.output_activation();
  h.seed = policy.seed;
  return h;
}

std::string encode_checkpoint(const Policy& policy) {
  const CheckpointHeader h = header_of(policy);
  Writer w;
  w.bytes(kCheckpointMagic, 8);
  w.u32(h.version);
  w.str(h.env_id);
  w.u8(static_cast<std::uint8_t>(h.parametrization));
  w.u32(static_cast<std::uint32_t>(h.codec.n_joints()));
  w.vec(h.codec.torque_limits);
  w.vec(h.codec.position_lower);
  w.vec(h.codec.position_upper);
  w.f64(h.codec.kp_min);
  w.f64(h.codec.kp_max);
  w.u32(static_cast<std::uint32_t>(h.obs_offset.size()));
  w.vec(h.obs_offset);
  w.vec(h.obs_scale);
  w.u8(static_cast<std::uint8_t>(h.hidden));
  w.u8(static_cast<std::uint8_t>(h.output));
  w.u32(static_cast<std::uint32_t>(h.layer_sizes.size()));
  for (int s : h.layer_sizes) w.u32(static_cast<std::uint32_t>(s));
  w.u64(h.seed);
  const Eigen::VectorXd params = policy.actor.flat_parameters();
  w.u64(static_cast<std::uint64_t>(params.size()));
  w.vec(params);
  w.u64(fnv1a(w.data().data(), w.data().size()));
  return std::move(w.data());
}

CheckpointHeader decode_checkpoint_header(const std::string& bytes) {
  Reader r(bytes);
  return read_header(r);
}

Policy decode_checkpoint(const std::string& bytes) {
  Reader r(bytes);
  const CheckpointHeader h = read_header(r);
  check_trailer(bytes);
  Mlp actor(h.layer_sizes, h.hidden, h.output);
  const std::uint64_t count = r.u64();
  if (count != static_cast<std::uint64_t>(actor.parameter_count())) {
    throw FormatError("checkpoint parameter count does not match the architecture");
  }
  actor.set_flat_parameters(r.vec(count));
  if (r.pos() + 8 != bytes.size()) throw FormatError("checkpoint has trailing data");

  Policy p;
  p.env_id = h.env_id;
  p.codec = h.codec;
  p.obs_offset = h.obs_offset;
  p.obs_scale = h.obs_scale;
  p.actor = std::move(actor);
  p.seed = h.seed;
  return p;
}

void save_checkpoint(const Policy& policy, const std::string& path) {
  const std::string bytes = encode_checkpoint(policy);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(fmt::format("cannot open {} for writing", path));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError(fmt::format("write to {} failed", path));
}

Policy load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(fmt::format("cannot open {}", path));
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

void check_compatible(const Policy& policy, std::string_view env_id, const ActionCodec& codec,
                      int observation_dim) {
  if (policy.env_id != env_id) {
    throw MismatchError(fmt::format("checkpoint was trained on '{}', environment is '{}'",
                                    policy.env_id, env_id));
  }
  if (policy.codec.parametrization != codec.parametrization) {
    throw MismatchError(fmt::format("checkpoint uses {} control, environment runs {}",
                                    to_string(policy.codec.parametrization),
                                    to_string(codec.parametrization)));
  }
  if (policy.codec.n_joints() != codec.n_joints() ||
      policy.obs_offset.size() != observation_dim) {
    throw MismatchError("checkpoint joint or observation layout differs from the environment");
  }
}

}  // namespace vic
