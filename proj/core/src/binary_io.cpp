#include "wii/binary_io.hpp"

#include <bit>
#include <istream>
#include <ostream>

#include "wii/error.hpp"

namespace wii {

namespace {

template <typename U>
void put_le(std::ostream& out, U v) {
  char buf[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, sizeof(U));
}

template <typename U>
U get_le(const unsigned char* buf) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void BinaryWriter::bytes(std::string_view raw) { out_.write(raw.data(), static_cast<std::streamsize>(raw.size())); }
void BinaryWriter::u8(std::uint8_t v) { put_le(out_, v); }
void BinaryWriter::u16(std::uint16_t v) { put_le(out_, v); }
void BinaryWriter::u32(std::uint32_t v) { put_le(out_, v); }
void BinaryWriter::u64(std::uint64_t v) { put_le(out_, v); }
void BinaryWriter::f32(float v) { put_le(out_, std::bit_cast<std::uint32_t>(v)); }
void BinaryWriter::f64(double v) { put_le(out_, std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::f32_array(std::span<const float> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out_.write(reinterpret_cast<const char*>(values.data()),
               static_cast<std::streamsize>(values.size_bytes()));
  } else {
    for (float v : values) f32(v);
  }
}

void BinaryWriter::string(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  bytes(s);
}

void BinaryReader::read(char* dst, std::size_t n) {
  in_.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) {
    throw Error(ErrorCode::corruption, "truncated payload");
  }
}

std::string BinaryReader::bytes(std::size_t n) {
  std::string s(n, '\0');
  read(s.data(), n);
  return s;
}

std::uint8_t BinaryReader::u8() {
  unsigned char b[1];
  read(reinterpret_cast<char*>(b), 1);
  return b[0];
}

std::uint16_t BinaryReader::u16() {
  unsigned char b[2];
  read(reinterpret_cast<char*>(b), 2);
  return get_le<std::uint16_t>(b);
}

std::uint32_t BinaryReader::u32() {
  unsigned char b[4];
  read(reinterpret_cast<char*>(b), 4);
  return get_le<std::uint32_t>(b);
}

std::uint64_t BinaryReader::u64() {
  unsigned char b[8];
  read(reinterpret_cast<char*>(b), 8);
  return get_le<std::uint64_t>(b);
}

float BinaryReader::f32() { return std::bit_cast<float>(u32()); }
double BinaryReader::f64() { return std::bit_cast<double>(u64()); }

void BinaryReader::f32_array(std::span<float> values) {
  if constexpr (std::endian::native == std::endian::little) {
    read(reinterpret_cast<char*>(values.data()), values.size_bytes());
  } else {
    for (float& v : values) v = f32();
  }
}

std::string BinaryReader::string() {
  const std::uint32_t n = u32();
  if (n > (1u << 24)) throw Error(ErrorCode::corruption, "implausible string length");
  return bytes(n);
}

}  // namespace wii
