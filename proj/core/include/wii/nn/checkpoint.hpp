#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "wii/nn/model.hpp"

namespace wii::nn {

// "WIIM", u16 version, arch descriptor (input L/W/C u16, num_classes u16,
// class ids u8, layer count u16, per layer u8 kind, u32 units, u16 kh,
// u16 kw, f64 p), u32 metadata pairs of length-prefixed strings, then u32
// parameter blobs of (u32 rows, u32 cols, rows*cols f32). Little-endian.
inline constexpr std::uint16_t kCheckpointVersion = 1;

using CheckpointMeta = std::map<std::string, std::string>;

void write_checkpoint(const Model<float>& model, const CheckpointMeta& meta, const std::filesystem::path& path);

struct Checkpoint {
  Model<float> model;
  CheckpointMeta meta;
};

Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace wii::nn
