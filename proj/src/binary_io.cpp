#include "binary_io.hpp"

#include <bit>
#include <cstring>
#include <limits>

#include "spanmine/error.hpp"

namespace spanmine::detail {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename U>
U to_le(U v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    U out = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      out = static_cast<U>((out << 8) | ((v >> (8 * i)) & 0xFF));
    }
    return out;
  }
}

}  // namespace

BinaryWriter::BinaryWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw Error("cannot open " + path.string() + " for writing");
}

void BinaryWriter::raw(const void* p, std::size_t n) {
  out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void BinaryWriter::magic(std::string_view four_cc) { raw(four_cc.data(), four_cc.size()); }
void BinaryWriter::u8(std::uint8_t v) { raw(&v, 1); }

void BinaryWriter::u32(std::uint32_t v) {
  v = to_le(v);
  raw(&v, 4);
}

void BinaryWriter::u64(std::uint64_t v) {
  v = to_le(v);
  raw(&v, 8);
}

void BinaryWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
void BinaryWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::string(std::string_view s) {
  u32(checked_u32(s.size(), "string length"));
  raw(s.data(), s.size());
}

void BinaryWriter::f32s(std::span<const float> values) {
  if constexpr (std::endian::native == std::endian::little) {
    raw(values.data(), values.size_bytes());
  } else {
    for (float v : values) f32(v);
  }
}

void BinaryWriter::f64s(std::span<const double> values) {
  if constexpr (std::endian::native == std::endian::little) {
    raw(values.data(), values.size_bytes());
  } else {
    for (double v : values) f64(v);
  }
}

void BinaryWriter::finish() {
  out_.flush();
  if (!out_) throw Error("write failed: " + path_.string());
}

BinaryReader::BinaryReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw Error("cannot open " + path.string());
}

void BinaryReader::raw(void* p, std::size_t n) {
  in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) {
    throw FormatError(path_.string() + ": unexpected end of file");
  }
}

void BinaryReader::expect_magic(std::string_view four_cc) {
  char buf[4];
  raw(buf, 4);
  if (std::string_view(buf, 4) != four_cc) {
    throw FormatError(path_.string() + ": bad magic, expected " + std::string(four_cc));
  }
}

std::uint8_t BinaryReader::u8() {
  std::uint8_t v;
  raw(&v, 1);
  return v;
}

std::uint32_t BinaryReader::u32() {
  std::uint32_t v;
  raw(&v, 4);
  return to_le(v);
}

std::uint64_t BinaryReader::u64() {
  std::uint64_t v;
  raw(&v, 8);
  return to_le(v);
}

float BinaryReader::f32() { return std::bit_cast<float>(u32()); }
double BinaryReader::f64() { return std::bit_cast<double>(u64()); }

std::string BinaryReader::string() {
  const std::uint32_t n = u32();
  std::string s(n, '\0');
  if (n > 0) raw(s.data(), n);
  return s;
}

void BinaryReader::f32s(std::span<float> out) {
  if constexpr (std::endian::native == std::endian::little) {
    raw(out.data(), out.size_bytes());
  } else {
    for (float& v : out) v = f32();
  }
}

void BinaryReader::f64s(std::span<double> out) {
  if constexpr (std::endian::native == std::endian::little) {
    raw(out.data(), out.size_bytes());
  } else {
    for (double& v : out) v = f64();
  }
}

bool BinaryReader::at_end() { return in_.peek() == std::ifstream::traits_type::eof(); }

std::uint32_t checked_u32(std::size_t v, std::string_view what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(std::string(what) + " does not fit in u32");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace spanmine::detail
