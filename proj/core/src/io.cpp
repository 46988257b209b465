#include "ritz/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ritz {

std::string format_double(double v) {
  // Shortest representation that still round-trips, so artifact bytes are
  // stable and diffs stay readable.
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back != v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
  }
  return buf;
}

void write_text_file(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& line : lines) {
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

void put_le_double(std::string& buf, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
}

double get_le_double(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_params_bin(const NetParams& params, const std::string& path) {
  const std::vector<double> flat = params.flatten();
  std::string buf;
  buf.reserve(flat.size() * 8);
  for (double v : flat) put_le_double(buf, v);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

NetParams read_params_bin(const std::string& path, int subnet_count, NetDims dims) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open params file: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() % 8 != 0) {
    throw std::runtime_error("params file size is not a multiple of 8: " + path);
  }
  std::vector<double> flat(buf.size() / 8);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    flat[i] = get_le_double(reinterpret_cast<const unsigned char*>(buf.data()) + 8 * i);
  }
  return NetParams::from_flat(flat, subnet_count, dims);
}

}  // namespace ritz
