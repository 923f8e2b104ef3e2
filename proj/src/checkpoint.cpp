#include "travnet/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "travnet/dataset.hpp"

namespace travnet {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'T', 'R', 'A', 'V', 'C', 'K', 'P', 'T'};

template <typename Values>
NamedBlob blob_from(const std::string& name, const std::vector<int>& shape, const Values& values) {
    NamedBlob b{name, shape, std::vector<float>(values.size())};
    for (std::size_t i = 0; i < values.size(); ++i) {
        b.data[i] = static_cast<float>(values[i]);
    }
    return b;
}

const NamedBlob& find_blob(const std::vector<NamedBlob>& blobs, const std::string& name) {
    for (const auto& b : blobs) {
        if (b.name == name) {
            return b;
        }
    }
    throw DataError(fmt::format("checkpoint is missing tensor '{}'", name));
}

template <typename Values>
void copy_into(const NamedBlob& src, Values& dst) {
    if (src.data.size() != dst.size()) {
        throw DataError(fmt::format("tensor '{}' has {} values, model expects {}", src.name, src.data.size(),
                                    dst.size()));
    }
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = static_cast<typename Values::value_type>(src.data[i]);
    }
}

nlohmann::json table_of(const std::vector<NamedBlob>& blobs) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& b : blobs) {
        t.push_back({{"name", b.name}, {"shape", b.shape}, {"count", b.data.size()}});
    }
    return t;
}

}  // namespace

Checkpoint capture_checkpoint(TraversabilityNet<float>& model, Adam<float>* main_opt, SgdMomentum<float>* domain_opt) {
    Checkpoint ckpt;
    ckpt.spec = model.spec();
    for (auto* p : model.all_parameters()) {
        ckpt.parameters.push_back(blob_from(p->name, p->shape, p->value));
    }
    for (auto* b : model.buffers()) {
        ckpt.buffers.push_back(blob_from(b->name, b->shape, b->value));
    }
    if (main_opt != nullptr) {
        const auto params = model.regression_parameters();
        for (std::size_t i = 0; i < params.size(); ++i) {
            ckpt.optimizer_state.push_back(
                blob_from("adam.m." + params[i]->name, params[i]->shape, main_opt->first_moments()[i]));
            ckpt.optimizer_state.push_back(
                blob_from("adam.v." + params[i]->name, params[i]->shape, main_opt->second_moments()[i]));
        }
        ckpt.adam_steps = main_opt->steps();
    }
    if (domain_opt != nullptr) {
        const auto params = model.domain_parameters();
        for (std::size_t i = 0; i < params.size(); ++i) {
            ckpt.optimizer_state.push_back(
                blob_from("sgd.v." + params[i]->name, params[i]->shape, domain_opt->velocity()[i]));
        }
    }
    return ckpt;
}

void restore_checkpoint(TraversabilityNet<float>& model, const Checkpoint& ckpt) {
    for (auto* p : model.all_parameters()) {
        copy_into(find_blob(ckpt.parameters, p->name), p->value);
    }
    for (auto* b : model.buffers()) {
        copy_into(find_blob(ckpt.buffers, b->name), b->value);
    }
}

void restore_optimizers(const Checkpoint& ckpt, Adam<float>* main_opt, SgdMomentum<float>* domain_opt) {
    // Optimizer moments are keyed by parameter name; the caller's optimizers were
    // built over the same parameter lists capture_checkpoint walked.
    if (main_opt != nullptr) {
        auto& m = main_opt->first_moments();
        auto& v = main_opt->second_moments();
        std::size_t i = 0;
        for (const auto& blob : ckpt.optimizer_state) {
            if (blob.name.rfind("adam.m.", 0) == 0) {
                if (i >= m.size()) {
                    throw DataError("checkpoint has more Adam moments than the optimizer");
                }
                copy_into(blob, m[i]);
                copy_into(find_blob(ckpt.optimizer_state, "adam.v." + blob.name.substr(7)), v[i]);
                ++i;
            }
        }
        main_opt->set_steps(ckpt.adam_steps);
    }
    if (domain_opt != nullptr) {
        auto& vel = domain_opt->velocity();
        std::size_t i = 0;
        for (const auto& blob : ckpt.optimizer_state) {
            if (blob.name.rfind("sgd.v.", 0) == 0) {
                if (i >= vel.size()) {
                    throw DataError("checkpoint has more SGD buffers than the optimizer");
                }
                copy_into(blob, vel[i]);
                ++i;
            }
        }
    }
}

std::unique_ptr<TraversabilityNet<float>> instantiate(const Checkpoint& ckpt) {
    auto model = std::make_unique<TraversabilityNet<float>>(ckpt.spec, ckpt.seed);
    restore_checkpoint(*model, ckpt);
    return model;
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
    nlohmann::json header = {
        {"format", "travnet-checkpoint"},
        {"spec", ckpt.spec},
        {"parameters", table_of(ckpt.parameters)},
        {"buffers", table_of(ckpt.buffers)},
        {"optimizer_state", table_of(ckpt.optimizer_state)},
        {"adam_steps", ckpt.adam_steps},
        {"epoch", ckpt.epoch},
        {"seed", ckpt.seed},
        {"metadata", ckpt.metadata},
    };
    const std::string text = header.dump();
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    const std::uint32_t version = Checkpoint::kFormatVersion;
    const std::uint64_t len = text.size();
    out.append(reinterpret_cast<const char*>(&version), sizeof(version));
    out.append(reinterpret_cast<const char*>(&len), sizeof(len));
    out += text;
    for (const auto* group : {&ckpt.parameters, &ckpt.buffers, &ckpt.optimizer_state}) {
        for (const auto& b : *group) {
            out.append(reinterpret_cast<const char*>(b.data.data()), b.data.size() * sizeof(float));
        }
    }
    return out;
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
    constexpr std::size_t prefix = sizeof(kMagic) + sizeof(std::uint32_t) + sizeof(std::uint64_t);
    if (bytes.size() < prefix || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
        throw DataError("not a travnet checkpoint");
    }
    std::uint32_t version = 0;
    std::uint64_t len = 0;
    std::memcpy(&version, bytes.data() + sizeof(kMagic), sizeof(version));
    std::memcpy(&len, bytes.data() + sizeof(kMagic) + sizeof(version), sizeof(len));
    if (version != Checkpoint::kFormatVersion) {
        throw DataError(fmt::format("unsupported checkpoint version {}", version));
    }
    if (bytes.size() < prefix + len) {
        throw DataError("truncated checkpoint header");
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.substr(prefix, len));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(fmt::format("corrupt checkpoint header: {}", e.what()));
    }
    Checkpoint ckpt;
    ckpt.spec = header.at("spec").get<ModelSpec>();
    ckpt.adam_steps = header.value("adam_steps", std::int64_t{0});
    ckpt.epoch = header.value("epoch", 0);
    ckpt.seed = header.value("seed", std::uint64_t{0});
    ckpt.metadata = header.value("metadata", nlohmann::json::object());
    std::size_t offset = prefix + len;
    auto read_group = [&](const char* key, std::vector<NamedBlob>& group) {
        for (const auto& entry : header.value(key, nlohmann::json::array())) {
            NamedBlob b;
            b.name = entry.at("name").get<std::string>();
            b.shape = entry.at("shape").get<std::vector<int>>();
            const auto count = entry.at("count").get<std::size_t>();
            if (bytes.size() < offset + count * sizeof(float)) {
                throw DataError(fmt::format("truncated checkpoint payload at '{}'", b.name));
            }
            b.data.resize(count);
            std::memcpy(b.data.data(), bytes.data() + offset, count * sizeof(float));
            offset += count * sizeof(float);
            group.push_back(std::move(b));
        }
    };
    read_group("parameters", ckpt.parameters);
    read_group("buffers", ckpt.buffers);
    read_group("optimizer_state", ckpt.optimizer_state);
    return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    write_file_atomic(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(fmt::format("cannot open checkpoint {}", path.string()));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return deserialize_checkpoint(buf.str());
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

std::string parameter_checksum(TraversabilityNet<float>& model) {
    std::string bytes;
    for (auto* p : model.all_parameters()) {
        bytes.append(reinterpret_cast<const char*>(p->value.data()), p->value.size() * sizeof(float));
    }
    return fnv1a_hex(bytes);
}

}  // namespace travnet
