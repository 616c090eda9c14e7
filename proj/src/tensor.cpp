#include "wavesplat/tensor.hpp"

#include <set>

namespace wavesplat {

void ChannelLayout::validate() const {
    std::set<std::string> seen;
    for (const auto& g : groups) {
        if (g.channels <= 0)
            throw ValidationError("ChannelLayout: group '" + g.name + "' has non-positive channel count");
        if (!seen.insert(g.name).second)
            throw ValidationError("ChannelLayout: duplicate group name '" + g.name + "'");
    }
}

ChannelLayout ChannelLayout::subset(const std::vector<std::string>& names) const {
    ChannelLayout out;
    for (const auto& g : groups) {
        for (const auto& n : names) {
            if (g.name == n) {
                out.groups.push_back(g);
                break;
            }
        }
    }
    if (out.groups.size() != names.size()) {
        for (const auto& n : names)
            if (!has_group(n)) throw ValidationError("ChannelLayout: unknown group '" + n + "'");
    }
    return out;
}

ChannelLayout ChannelLayout::avatar() {
    return ChannelLayout{{{"position_mu", 3},
                          {"offset_d", 3},
                          {"rotation_q", 4},
                          {"scale_s", 3},
                          {"opacity_a", 1},
                          {"sh_eta", 12}}};
}

ChannelLayout ChannelLayout::flat(int n) {
    return ChannelLayout{{{"attr", n}}};
}

void TextureSequence::validate() const {
    if (frames.empty()) throw ValidationError("TextureSequence: no frames");
    layout.validate();
    if (layout.total_channels() != frames[0].channels())
        throw ValidationError("TextureSequence: layout channel sum does not match texture channels");
    for (std::size_t f = 1; f < frames.size(); ++f)
        if (!frames[f].same_shape(frames[0]))
            throw ValidationError("TextureSequence: frame " + std::to_string(f) + " shape differs from frame 0");
}

Texture split_channels(const Texture& tex, const ChannelLayout& layout,
                       const std::vector<std::string>& group_names) {
    if (layout.total_channels() != tex.channels())
        throw ValidationError("split_channels: layout does not match texture channel count");
    // Collect (offset, count) spans in layout order.
    std::vector<std::pair<int, int>> spans;
    int out_channels = 0;
    for (const auto& g : layout.groups) {
        for (const auto& n : group_names) {
            if (g.name == n) {
                spans.emplace_back(layout.group_offset(g.name), g.channels);
                out_channels += g.channels;
                break;
            }
        }
    }
    for (const auto& n : group_names)
        if (!layout.has_group(n)) throw ValidationError("split_channels: unknown group '" + n + "'");

    Texture out(tex.height(), tex.width(), out_channels);
    const std::size_t texels = static_cast<std::size_t>(tex.height()) * tex.width();
    const float* src = tex.data().data();
    float* dst = out.data().data();
    const int cin = tex.channels();
    for (std::size_t t = 0; t < texels; ++t) {
        const float* s = src + t * cin;
        float* d = dst + t * out_channels;
        for (const auto& [off, cnt] : spans) {
            for (int c = 0; c < cnt; ++c) *d++ = s[off + c];
        }
    }
    return out;
}

Texture merge_channels(const ChannelLayout& layout,
                       const std::vector<std::pair<std::vector<std::string>, Texture>>& parts) {
    if (parts.empty()) throw ValidationError("merge_channels: no parts");
    const int h = parts[0].second.height();
    const int w = parts[0].second.width();
    Texture out(h, w, layout.total_channels());

    // Destination offset per group name.
    std::size_t covered = 0;
    for (const auto& [names, part] : parts) {
        if (part.height() != h || part.width() != w)
            throw ValidationError("merge_channels: part spatial shape mismatch");
        int expected = 0;
        for (const auto& n : names) expected += layout.group_channels(n);
        if (expected != part.channels())
            throw ValidationError("merge_channels: part channel count does not match its groups");

        const std::size_t texels = static_cast<std::size_t>(h) * w;
        int src_off = 0;
        for (const auto& n : names) {
            const int dst_off = layout.group_offset(n);
            const int cnt = layout.group_channels(n);
            const float* src = part.data().data();
            float* dst = out.data().data();
            const int cin = part.channels();
            const int cout = out.channels();
            for (std::size_t t = 0; t < texels; ++t)
                for (int c = 0; c < cnt; ++c)
                    dst[t * cout + dst_off + c] = src[t * cin + src_off + c];
            src_off += cnt;
            covered += static_cast<std::size_t>(cnt);
        }
    }
    if (covered != static_cast<std::size_t>(layout.total_channels()))
        throw ValidationError("merge_channels: parts do not cover the full layout");
    return out;
}

}  // namespace wavesplat
