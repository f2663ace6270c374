#pragma once

// Little-endian binary helpers shared by the exchange, index and params file formats.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>

namespace spanmine::detail {

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path);

  void magic(std::string_view four_cc);
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void f64(double v);
  void string(std::string_view s);  // u32 length prefix + bytes
  void f32s(std::span<const float> values);
  void f64s(std::span<const double> values);
  void finish();

 private:
  void raw(const void* p, std::size_t n);
  std::filesystem::path path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path);

  void expect_magic(std::string_view four_cc);
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  double f64();
  std::string string();
  void f32s(std::span<float> out);
  void f64s(std::span<double> out);
  bool at_end();

 private:
  void raw(void* p, std::size_t n);
  std::filesystem::path path_;
  std::ifstream in_;
};

std::uint32_t checked_u32(std::size_t v, std::string_view what);

}  // namespace spanmine::detail
