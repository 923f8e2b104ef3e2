#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "travnet/model.hpp"
#include "travnet/optim.hpp"

namespace travnet {

struct NamedBlob {
    std::string name;
    std::vector<int> shape;
    std::vector<float> data;

    bool operator==(const NamedBlob&) const = default;
};

/// Everything needed to restore a model and resume its optimizers.
///
/// On disk: the 8-byte magic "TRAVCKPT", a little-endian u32 major version,
/// a u64 header length, a JSON header (spec, tensor table, metadata), then the
/// float32 payload of every tensor in table order. Readers accept any file with
/// the same major version and ignore unknown header keys.
struct Checkpoint {
    static constexpr std::uint32_t kFormatVersion = 1;

    ModelSpec spec;
    std::vector<NamedBlob> parameters;
    std::vector<NamedBlob> buffers;
    std::vector<NamedBlob> optimizer_state;
    std::int64_t adam_steps = 0;
    int epoch = 0;
    std::uint64_t seed = 0;
    nlohmann::json metadata = nlohmann::json::object();

    bool operator==(const Checkpoint&) const = default;
};

/// Snapshot of model parameters and buffers (optimizers optional).
Checkpoint capture_checkpoint(TraversabilityNet<float>& model, Adam<float>* main_opt = nullptr,
                              SgdMomentum<float>* domain_opt = nullptr);

/// Copies parameters and buffers into a model with a matching layout.
void restore_checkpoint(TraversabilityNet<float>& model, const Checkpoint& ckpt);

/// Restores optimizer moments captured by capture_checkpoint.
void restore_optimizers(const Checkpoint& ckpt, Adam<float>* main_opt, SgdMomentum<float>* domain_opt);

/// Builds a tiny-encoder model from the stored spec and loads the weights.
std::unique_ptr<TraversabilityNet<float>> instantiate(const Checkpoint& ckpt);

std::string serialize_checkpoint(const Checkpoint& ckpt);
Checkpoint deserialize_checkpoint(const std::string& bytes);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a byte string, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);
/// Digest over all parameter values of a model.
std::string parameter_checksum(TraversabilityNet<float>& model);

}  // namespace travnet
