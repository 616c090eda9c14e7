#include "wavesplat/io.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace wavesplat::io {

static_assert(std::endian::native == std::endian::little,
              "blob I/O assumes a little-endian host");

using nlohmann::json;

namespace {

json layout_to_json(const ChannelLayout& layout) {
    json arr = json::array();
    for (const auto& g : layout.groups) arr.push_back({{"name", g.name}, {"channels", g.channels}});
    return arr;
}

ChannelLayout layout_from_json(const json& arr) {
    ChannelLayout layout;
    for (const auto& g : arr)
        layout.groups.push_back({g.at("name").get<std::string>(), g.at("channels").get<int>()});
    layout.validate();
    return layout;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ValidationError("bad JSON in '" + path.string() + "': " + e.what());
    }
}

void dump_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << j.dump(2) << "\n";
    if (!out) throw ValidationError("I/O failure writing '" + path.string() + "'");
}

}  // namespace

void write_f32_blob(const std::filesystem::path& path, const std::vector<float>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write blob '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!out) throw ValidationError("I/O failure writing blob '" + path.string() + "'");
}

std::vector<float> read_f32_blob(const std::filesystem::path& path, std::size_t expected_count) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw ValidationError("missing blob '" + path.string() + "'");
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes != expected_count * sizeof(float))
        throw ValidationError("blob '" + path.string() + "': size mismatch, expected " +
                              std::to_string(expected_count * sizeof(float)) + " bytes, found " +
                              std::to_string(bytes));
    std::vector<float> data(expected_count);
    in.seekg(0);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw ValidationError("I/O failure reading blob '" + path.string() + "'");
    return data;
}

void write_i32_blob(const std::filesystem::path& path, const std::vector<std::int32_t>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write blob '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(std::int32_t)));
    if (!out) throw ValidationError("I/O failure writing blob '" + path.string() + "'");
}

std::vector<std::int32_t> read_i32_blob(const std::filesystem::path& path, std::size_t expected_count) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw ValidationError("missing blob '" + path.string() + "'");
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes != expected_count * sizeof(std::int32_t))
        throw ValidationError("blob '" + path.string() + "': size mismatch, expected " +
                              std::to_string(expected_count * sizeof(std::int32_t)) + " bytes, found " +
                              std::to_string(bytes));
    std::vector<std::int32_t> data(expected_count);
    in.seekg(0);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw ValidationError("I/O failure reading blob '" + path.string() + "'");
    return data;
}

std::filesystem::path save_sequence(const TextureSequence& seq, const std::filesystem::path& dir) {
    seq.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec && !std::filesystem::is_directory(dir))
        throw ValidationError("cannot create directory '" + dir.string() + "': " + ec.message());

    json manifest;
    manifest["version"] = 1;
    manifest["kind"] = "texture_sequence";
    manifest["frames"] = seq.frame_count();
    manifest["height"] = seq.height();
    manifest["width"] = seq.width();
    manifest["channels"] = seq.channels();
    manifest["layout"] = layout_to_json(seq.layout);
    manifest["frame_rate"] = seq.frame_rate;
    json blobs = json::array();
    for (int f = 0; f < seq.frame_count(); ++f) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06d.f32", f);
        write_f32_blob(dir / name, seq.frames[static_cast<std::size_t>(f)].data());
        blobs.push_back(name);
    }
    manifest["blob_paths"] = blobs;
    const auto manifest_path = dir / "manifest.json";
    dump_json(manifest, manifest_path);
    return manifest_path;
}

TextureSequence load_sequence(const std::filesystem::path& manifest_path) {
    const json m = load_json(manifest_path);
    if (m.value("kind", "texture_sequence") != "texture_sequence")
        throw ValidationError("'" + manifest_path.string() + "' is not a texture_sequence manifest");
    const int frames = m.at("frames").get<int>();
    const int h = m.at("height").get<int>();
    const int w = m.at("width").get<int>();
    const int c = m.at("channels").get<int>();
    if (frames < 1) throw ValidationError("sequence must have at least one frame");

    TextureSequence seq;
    seq.layout = layout_from_json(m.at("layout"));
    if (seq.layout.total_channels() != c)
        throw ValidationError("sequence layout channel sum " + std::to_string(seq.layout.total_channels()) +
                              " != declared channels " + std::to_string(c));
    seq.frame_rate = m.value("frame_rate", 30.0);
    const auto& blob_paths = m.at("blob_paths");
    if (static_cast<int>(blob_paths.size()) != frames)
        throw ValidationError("manifest declares " + std::to_string(frames) + " frames but lists " +
                              std::to_string(blob_paths.size()) + " blobs");

    const auto base = manifest_path.parent_path();
    const std::size_t count = static_cast<std::size_t>(h) * w * c;
    seq.frames.reserve(static_cast<std::size_t>(frames));
    for (int f = 0; f < frames; ++f) {
        auto data = read_f32_blob(base / blob_paths[static_cast<std::size_t>(f)].get<std::string>(), count);
        Texture tex(h, w, c, std::move(data));
        const std::ptrdiff_t bad = tex.first_non_finite();
        if (bad >= 0) {
            const std::ptrdiff_t texel = bad / c;
            throw ValidationError("non-finite value in frame " + std::to_string(f) + " at texel (y=" +
                                  std::to_string(texel / w) + ", x=" + std::to_string(texel % w) +
                                  ", c=" + std::to_string(bad % c) + ")");
        }
        seq.frames.push_back(std::move(tex));
    }
    seq.validate();
    return seq;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shortest representation that round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw ValidationError("I/O failure writing '" + path.string() + "'");
}

}  // namespace wavesplat::io
