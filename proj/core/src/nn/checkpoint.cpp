#include "wii/nn/checkpoint.hpp"

#include <fstream>

#include "wii/binary_io.hpp"
#include "wii/error.hpp"

namespace wii::nn {

namespace {
constexpr char kMagic[] = "WIIM";
}

void write_checkpoint(const Model<float>& model, const CheckpointMeta& meta, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::file, "cannot open " + path.string() + " for writing");
  BinaryWriter w(out);
  const auto& arch = model.arch();
  w.bytes(std::string_view(kMagic, 4));
  w.u16(kCheckpointVersion);
  w.u16(static_cast<std::uint16_t>(arch.input.length));
  w.u16(static_cast<std::uint16_t>(arch.input.width));
  w.u16(static_cast<std::uint16_t>(arch.input.channels));
  w.u16(static_cast<std::uint16_t>(arch.num_classes));
  for (int id : model.class_ids) w.u8(static_cast<std::uint8_t>(id));
  w.u16(static_cast<std::uint16_t>(arch.layers.size()));
  for (const auto& l : arch.layers) {
    w.u8(static_cast<std::uint8_t>(l.kind));
    w.u32(static_cast<std::uint32_t>(l.units));
    w.u16(static_cast<std::uint16_t>(l.kh));
    w.u16(static_cast<std::uint16_t>(l.kw));
    w.f64(l.p);
  }
  w.u32(static_cast<std::uint32_t>(meta.size()));
  for (const auto& [k, v] : meta) {
    w.string(k);
    w.string(v);
  }
  const auto params = model.params();
  w.u32(static_cast<std::uint32_t>(params.size()));
  for (const auto* p : params) {
    w.u32(static_cast<std::uint32_t>(p->value.rows()));
    w.u32(static_cast<std::uint32_t>(p->value.cols()));
    w.f32_array(std::span<const float>(p->value.data(), static_cast<std::size_t>(p->value.size())));
  }
  out.flush();
  if (!out) throw Error(ErrorCode::file, "write failed for " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file, "cannot open " + path.string());
  BinaryReader r(in);
  if (r.bytes(4) != std::string_view(kMagic, 4)) throw Error(ErrorCode::format, "bad magic in " + path.string());
  const auto version = r.u16();
  if (version != kCheckpointVersion) throw Error(ErrorCode::format, "unsupported checkpoint version");

  ArchSpec arch;
  arch.input.length = r.u16();
  arch.input.width = r.u16();
  arch.input.channels = r.u16();
  arch.num_classes = r.u16();
  std::vector<int> class_ids(static_cast<std::size_t>(arch.num_classes));
  for (auto& id : class_ids) id = r.u8();
  const int layers = r.u16();
  for (int i = 0; i < layers; ++i) {
    LayerSpec l;
    const auto kind = r.u8();
    if (kind < 1 || kind > 6) throw Error(ErrorCode::format, "unknown layer kind in checkpoint");
    l.kind = static_cast<LayerKind>(kind);
    l.units = static_cast<int>(r.u32());
    l.kh = r.u16();
    l.kw = r.u16();
    l.p = r.f64();
    arch.layers.push_back(l);
  }
  CheckpointMeta meta;
  const auto n_meta = r.u32();
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    auto k = r.string();
    meta[k] = r.string();
  }

  Model<float> model(arch, 0);
  model.class_ids = class_ids;
  auto params = model.params();
  if (r.u32() != params.size()) throw Error(ErrorCode::corruption, "parameter count does not match architecture");
  for (auto* p : params) {
    const auto rows = r.u32();
    const auto cols = r.u32();
    if (rows != p->value.rows() || cols != p->value.cols()) throw Error(ErrorCode::corruption, "parameter shape mismatch");
    r.f32_array(std::span<float>(p->value.data(), static_cast<std::size_t>(p->value.size())));
  }
  return {std::move(model), std::move(meta)};
}

}  // namespace wii::nn
