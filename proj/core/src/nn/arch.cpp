#include "wii/nn/arch.hpp"

#include <sstream>

#include "wii/error.hpp"

namespace wii::nn {

std::vector<Shape> ArchSpec::shapes() const {
  if (input.size() <= 0) throw Error(ErrorCode::shape, "input shape must be positive");
  if (layers.empty() || layers.back().kind != LayerKind::softmax) {
    throw Error(ErrorCode::shape, "architecture must end in softmax");
  }
  std::vector<Shape> out;
  Shape s = input;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    switch (l.kind) {
      case LayerKind::conv:
        if (l.units < 1 || l.kh < 1 || l.kw < 1) throw Error(ErrorCode::shape, "conv layer needs maps and kernel >= 1");
        if (l.kh > s.length || l.kw > s.width) {
          std::ostringstream os;
          os << "kernel " << l.kh << "x" << l.kw << " larger than input " << s.length << "x" << s.width;
          throw Error(ErrorCode::shape, os.str());
        }
        s = {s.length - l.kh + 1, s.width - l.kw + 1, l.units};
        break;
      case LayerKind::flatten:
        s = {s.size(), 1, 1};
        break;
      case LayerKind::dense:
        if (l.units < 1) throw Error(ErrorCode::shape, "dense layer needs outputs >= 1");
        if (s.width != 1 || s.channels != 1) throw Error(ErrorCode::shape, "dense layer needs a flattened input");
        s = {l.units, 1, 1};
        break;
      case LayerKind::dropout:
        if (!(l.p >= 0.0 && l.p < 1.0)) throw Error(ErrorCode::config, "dropout rate must lie in [0, 1)");
        break;
      case LayerKind::softmax:
        if (i + 1 != layers.size()) throw Error(ErrorCode::shape, "softmax must be the last layer");
        if (s.size() != num_classes) throw Error(ErrorCode::shape, "softmax width differs from num_classes");
        break;
      case LayerKind::relu:
        break;
    }
    out.push_back(s);
  }
  return out;
}

int ArchSpec::flatten_dim() const {
  const auto s = shapes();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].kind == LayerKind::flatten) return s[i].size();
  }
  return input.size();
}

std::size_t ArchSpec::parameter_count() const {
  const auto s = shapes();
  std::size_t count = 0;
  Shape prev = input;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.kind == LayerKind::conv) {
      count += static_cast<std::size_t>(l.units) * static_cast<std::size_t>(l.kh * l.kw * prev.channels) +
               static_cast<std::size_t>(l.units);
    } else if (l.kind == LayerKind::dense) {
      count += static_cast<std::size_t>(prev.size()) * static_cast<std::size_t>(l.units) +
               static_cast<std::size_t>(l.units);
    }
    prev = s[i];
  }
  return count;
}

std::string ArchSpec::describe() const {
  std::ostringstream os;
  os << "input " << input.length << "x" << input.width << "x" << input.channels;
  for (const auto& l : layers) {
    switch (l.kind) {
      case LayerKind::conv: os << " | conv " << l.units << " " << l.kh << "x" << l.kw; break;
      case LayerKind::relu: os << " | relu"; break;
      case LayerKind::dropout: os << " | dropout " << l.p; break;
      case LayerKind::flatten: os << " | flatten"; break;
      case LayerKind::dense: os << " | dense " << l.units; break;
      case LayerKind::softmax: os << " | softmax"; break;
    }
  }
  return os.str();
}

namespace {

ArchSpec two_conv_cnn(int input_len, int num_classes, int maps1, int maps2, int hidden, double p, bool drop_conv1) {
  ArchSpec a;
  a.input = {input_len, 2, 1};
  a.num_classes = num_classes;
  a.layers.push_back(LayerSpec::conv(maps1, 3, 1));
  a.layers.push_back(LayerSpec::relu());
  if (drop_conv1) a.layers.push_back(LayerSpec::dropout(p));
  a.layers.push_back(LayerSpec::conv(maps2, 3, 2));
  a.layers.push_back(LayerSpec::relu());
  a.layers.push_back(LayerSpec::dropout(p));
  a.layers.push_back(LayerSpec::flatten());
  a.layers.push_back(LayerSpec::dense(hidden));
  a.layers.push_back(LayerSpec::relu());
  a.layers.push_back(LayerSpec::dropout(p));
  a.layers.push_back(LayerSpec::dense(num_classes));
  a.layers.push_back(LayerSpec::softmax());
  return a;
}

}  // namespace

ArchSpec proposed_cnn(int input_len, int num_classes, double dropout_p, bool dropout_after_conv1) {
  return two_conv_cnn(input_len, num_classes, 256, 256, 1024, dropout_p, dropout_after_conv1);
}

ArchSpec baseline_cnn(int input_len, int num_classes, double dropout_p) {
  return two_conv_cnn(input_len, num_classes, 64, 1024, 128, dropout_p, false);
}

}  // namespace wii::nn
