#include "optivmd/fmap.hpp"

#include "optivmd/errors.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace optivmd {

namespace {
void w_u32(std::ostream& out, uint32_t v) {
    char b[4] = {char(v & 0xFF), char((v >> 8) & 0xFF), char((v >> 16) & 0xFF), char((v >> 24) & 0xFF)};
    out.write(b, 4);
}
uint32_t r_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw TruncatedFile("fmap: truncated header");
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}
}  // namespace

void write_fmap(const std::string& path, const FeatureMap& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write("FMAP", 4);
    out.put(char(1));
    w_u32(out, static_cast<uint32_t>(map.H));
    w_u32(out, static_cast<uint32_t>(map.W));
    w_u32(out, static_cast<uint32_t>(map.C));
    for (size_t c = 0; c < map.C; ++c) {
        const std::string name = c < map.channel_names.size() ? map.channel_names[c] : "";
        out.write(name.c_str(), static_cast<std::streamsize>(name.size() + 1));
    }
    static_assert(sizeof(float) == 4);
    for (float v : map.data) {
        uint32_t bits;
        std::memcpy(&bits, &v, 4);
        w_u32(out, bits);
    }
}

FeatureMap read_fmap(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FMAP", 4) != 0) throw Error("fmap: bad magic in " + path);
    const int version = in.get();
    if (version != 1) throw Error("fmap: unsupported version " + std::to_string(version));
    FeatureMap map;
    map.H = r_u32(in);
    map.W = r_u32(in);
    map.C = r_u32(in);
    map.channel_names.resize(map.C);
    for (size_t c = 0; c < map.C; ++c) {
        std::string name;
        std::getline(in, name, '\0');
        if (!in) throw TruncatedFile("fmap: truncated channel names in " + path);
        map.channel_names[c] = name;
    }
    const size_t count = map.H * map.W * map.C;
    map.data.resize(count);
    for (size_t i = 0; i < count; ++i) {
        uint32_t bits = r_u32(in);
        std::memcpy(&map.data[i], &bits, 4);
    }
    return map;
}

}  // namespace optivmd
