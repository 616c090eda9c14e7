#pragma once

#include <string>
#include <vector>

#include "wavesplat/common.hpp"

namespace wavesplat {

// Dense H x W x C attribute texture. Row-major, channel-innermost:
// element (y, x, c) lives at data[(y * width + x) * channels + c].
class Texture {
public:
    Texture() = default;
    Texture(int height, int width, int channels)
        : height_(height), width_(width), channels_(channels),
          data_(static_cast<std::size_t>(height) * width * channels, 0.0f) {
        if (height < 0 || width < 0 || channels < 0)
            throw ValidationError("Texture: negative dimension");
    }
    Texture(int height, int width, int channels, std::vector<float> data)
        : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
        if (data_.size() != static_cast<std::size_t>(height) * width * channels)
            throw ValidationError("Texture: data length does not match dimensions");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    float& at(int y, int x, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    float at(int y, int x, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    std::vector<float>& data() { return data_; }
    const std::vector<float>& data() const { return data_; }

    bool same_shape(const Texture& other) const {
        return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
    }

    /// Index of the first non-finite value, or -1 if all finite.
    std::ptrdiff_t first_non_finite() const {
        for (std::size_t i = 0; i < data_.size(); ++i)
            if (!std::isfinite(data_[i])) return static_cast<std::ptrdiff_t>(i);
        return -1;
    }

private:
    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

struct ChannelGroup {
    std::string name;
    int channels = 0;
};

// Ordered named channel groups partitioning a texture's channel axis.
struct ChannelLayout {
    std::vector<ChannelGroup> groups;

    int total_channels() const {
        int n = 0;
        for (const auto& g : groups) n += g.channels;
        return n;
    }

    bool has_group(const std::string& name) const {
        for (const auto& g : groups)
            if (g.name == name) return true;
        return false;
    }

    /// First channel index of a group.
    int group_offset(const std::string& name) const {
        int off = 0;
        for (const auto& g : groups) {
            if (g.name == name) return off;
            off += g.channels;
        }
        throw ValidationError("ChannelLayout: unknown group '" + name + "'");
    }

    int group_channels(const std::string& name) const {
        for (const auto& g : groups)
            if (g.name == name) return g.channels;
        throw ValidationError("ChannelLayout: unknown group '" + name + "'");
    }

    void validate() const;

    /// Sub-layout containing only the named groups, original order preserved.
    ChannelLayout subset(const std::vector<std::string>& names) const;

    // 26-channel Gaussian-splat attribute layout.
    static ChannelLayout avatar();
    /// Single anonymous group of n channels.
    static ChannelLayout flat(int n);
};

struct TextureSequence {
    std::vector<Texture> frames;
    ChannelLayout layout;
    double frame_rate = 30.0;

    int frame_count() const { return static_cast<int>(frames.size()); }
    int height() const { return frames.empty() ? 0 : frames[0].height(); }
    int width() const { return frames.empty() ? 0 : frames[0].width(); }
    int channels() const { return frames.empty() ? 0 : frames[0].channels(); }

    void validate() const;
};

/// Extract the named channel groups into a new texture (layout order preserved).
Texture split_channels(const Texture& tex, const ChannelLayout& layout,
                       const std::vector<std::string>& group_names);

/// Reassemble a full texture from per-part textures covering a partition of the
/// layout's groups. Parts may be given in any order.
Texture merge_channels(const ChannelLayout& layout,
                       const std::vector<std::pair<std::vector<std::string>, Texture>>& parts);

}  // namespace wavesplat
