#include "nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/fsutil.hpp"

namespace wsod::nn {

namespace {

constexpr char kMagic[8] = {'W', 'S', 'O', 'D', 'C', 'K', 'P', '1'};

void write_u32(std::ostream& f, uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ostream& f, uint64_t v) { f.write(reinterpret_cast<const char*>(&v), 8); }
void write_f64(std::ostream& f, double v) { f.write(reinterpret_cast<const char*>(&v), 8); }

uint32_t read_u32(std::istream& f) {
    uint32_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
uint64_t read_u64(std::istream& f) {
    uint64_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
double read_f64(std::istream& f) {
    double v = 0;
    f.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

void write_tensor_map(std::ostream& f, const std::map<std::string, std::vector<double>>& m) {
    write_u32(f, static_cast<uint32_t>(m.size()));
    for (const auto& [name, data] : m) {
        write_u32(f, static_cast<uint32_t>(name.size()));
        f.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_u64(f, data.size());
        f.write(reinterpret_cast<const char*>(data.data()),
                static_cast<std::streamsize>(data.size() * sizeof(double)));
    }
}

std::map<std::string, std::vector<double>> read_tensor_map(std::istream& f) {
    std::map<std::string, std::vector<double>> m;
    uint32_t n = read_u32(f);
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t name_len = read_u32(f);
        std::string name(name_len, '\0');
        f.read(name.data(), name_len);
        uint64_t count = read_u64(f);
        std::vector<double> data(count);
        f.read(reinterpret_cast<char*>(data.data()),
               static_cast<std::streamsize>(count * sizeof(double)));
        m[name] = std::move(data);
    }
    return m;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    require_runtime(static_cast<bool>(f), "cannot write checkpoint " + path);
    f.write(kMagic, 8);
    write_u32(f, 1);  // format version
    write_tensor_map(f, ckpt.tensors);
    write_tensor_map(f, ckpt.opt_state);
    write_u64(f, ckpt.adam_t);
    write_u64(f, ckpt.rng_state.state);
    f.put(static_cast<char>(ckpt.rng_state.have_spare));
    write_f64(f, ckpt.rng_state.spare);
    write_u32(f, static_cast<uint32_t>(ckpt.epoch));
    require_runtime(static_cast<bool>(f), "write failed for checkpoint " + path);
    f.close();

    nlohmann::json sidecar = {
        {"backbone", ckpt.backbone},   {"role", ckpt.role}, {"num_categories", ckpt.num_categories},
        {"epoch", ckpt.epoch},         {"seed", ckpt.seed}, {"format_version", 1},
    };
    write_text_file(path + ".json", sidecar.dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require_runtime(static_cast<bool>(f), "checkpoint not found: " + path);
    char magic[8];
    f.read(magic, 8);
    require_runtime(f && std::memcmp(magic, kMagic, 8) == 0, "bad checkpoint magic in " + path);
    uint32_t version = read_u32(f);
    require_runtime(version == 1, "unsupported checkpoint version in " + path);

    Checkpoint ckpt;
    ckpt.tensors = read_tensor_map(f);
    ckpt.opt_state = read_tensor_map(f);
    ckpt.adam_t = read_u64(f);
    ckpt.rng_state.state = read_u64(f);
    ckpt.rng_state.have_spare = static_cast<uint8_t>(f.get());
    ckpt.rng_state.spare = read_f64(f);
    ckpt.epoch = static_cast<int>(read_u32(f));
    require_runtime(static_cast<bool>(f), "truncated checkpoint " + path);

    nlohmann::json sidecar = nlohmann::json::parse(read_text_file(path + ".json"));
    ckpt.backbone = sidecar.value("backbone", "");
    ckpt.role = sidecar.value("role", "");
    ckpt.num_categories = sidecar.value("num_categories", 0);
    ckpt.seed = sidecar.value("seed", 0ULL);
    return ckpt;
}

}  // namespace wsod::nn
