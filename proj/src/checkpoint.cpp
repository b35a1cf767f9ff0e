#include "proxops/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <vector>

namespace proxops {

namespace {

void append_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void append_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void append_f64(std::vector<unsigned char>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    append_u64(out, bits);
}

std::uint32_t read_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

double read_f64(const unsigned char* p) {
    const std::uint64_t bits = read_u64(p);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& why) {
    throw std::runtime_error("checkpoint " + path.string() + ": " + why +
                             " (expected magic bytes \"PXNNPOL1\")");
}

}  // namespace

std::uint32_t crc32_ieee(const unsigned char* data, std::size_t size) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < size; ++i) {
        crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

void save_checkpoint(const MlpParams& params, const std::filesystem::path& path) {
    std::vector<unsigned char> buf;
    buf.reserve(64 + 8 * params.parameter_count());
    buf.insert(buf.end(), kCheckpointMagic, kCheckpointMagic + sizeof(kCheckpointMagic));
    append_u32(buf, kCheckpointVersion);
    append_u32(buf, params.shape.head == HeadKind::Categorical ? 0u : 1u);
    append_u32(buf, static_cast<std::uint32_t>(params.shape.obs_dim));
    append_u32(buf, static_cast<std::uint32_t>(params.shape.axes));
    append_u32(buf, static_cast<std::uint32_t>(params.shape.choices));
    append_u32(buf, static_cast<std::uint32_t>(params.shape.hidden1));
    append_u32(buf, static_cast<std::uint32_t>(params.shape.hidden2));
    append_u64(buf, params.parameter_count());
    for (Eigen::Index i = 0; i < params.flat.size(); ++i) append_f64(buf, params.flat[i]);
    append_u32(buf, crc32_ieee(buf.data(), buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

MlpParams load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "missing or unreadable");
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

    constexpr std::size_t header_size = 8 + 4 * 7 + 8;
    if (buf.size() < header_size + 4) fail(path, "truncated header");
    if (std::memcmp(buf.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
        fail(path, "bad magic bytes");
    }

    const unsigned char* p = buf.data() + 8;
    const std::uint32_t version = read_u32(p);
    if (version != kCheckpointVersion) fail(path, "unsupported version " + std::to_string(version));

    NetShape shape;
    shape.head = read_u32(p + 4) == 0 ? HeadKind::Categorical : HeadKind::Gaussian;
    shape.obs_dim = static_cast<int>(read_u32(p + 8));
    shape.axes = static_cast<int>(read_u32(p + 12));
    shape.choices = static_cast<int>(read_u32(p + 16));
    shape.hidden1 = static_cast<int>(read_u32(p + 20));
    shape.hidden2 = static_cast<int>(read_u32(p + 24));
    const std::uint64_t count = read_u64(p + 28);

    if (buf.size() != header_size + 8 * count + 4) fail(path, "size mismatch");
    const std::uint32_t stored_crc = read_u32(buf.data() + buf.size() - 4);
    const std::uint32_t actual_crc = crc32_ieee(buf.data(), buf.size() - 4);
    if (stored_crc != actual_crc) fail(path, "checksum mismatch");

    MlpParams params = MlpParams::zeros(shape);
    if (params.parameter_count() != count) fail(path, "parameter count does not match shape");
    for (std::uint64_t i = 0; i < count; ++i) {
        params.flat[static_cast<Eigen::Index>(i)] = read_f64(buf.data() + header_size + 8 * i);
    }
    return params;
}

}  // namespace proxops
