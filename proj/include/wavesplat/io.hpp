#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wavesplat/tensor.hpp"

namespace wavesplat::io {

// On-disk convention used across the project: a JSON manifest describing
// shapes plus raw little-endian blobs, float32 for real data and int32 for
// indices, row-major, channel-innermost.

/// Writes manifest.json plus one blob per frame; returns the manifest path.
std::filesystem::path save_sequence(const TextureSequence& seq, const std::filesystem::path& dir);

/// Loads and validates a sequence written by save_sequence. Rejects shape or
/// size mismatches and non-finite values, reporting frame and texel indices.
TextureSequence load_sequence(const std::filesystem::path& manifest_path);

void write_f32_blob(const std::filesystem::path& path, const std::vector<float>& data);
std::vector<float> read_f32_blob(const std::filesystem::path& path, std::size_t expected_count);
void write_i32_blob(const std::filesystem::path& path, const std::vector<std::int32_t>& data);
std::vector<std::int32_t> read_i32_blob(const std::filesystem::path& path, std::size_t expected_count);

/// Deterministic float formatting for CSV output (shortest round-trip form).
std::string format_double(double v);

/// Writes rows as CSV with a fixed header; byte-stable for identical inputs.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace wavesplat::io
