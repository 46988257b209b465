#pragma once

#include <string>
#include <vector>

#include "ritz/network.hpp"

namespace ritz {

/// Shortest round-trip decimal formatting used by every CSV/JSON writer so
/// artifacts are byte-stable across runs.
std::string format_double(double v);

/// params.bin: the flat parameter array as little-endian IEEE-754 doubles, in
/// block order W1, b1, W2, b2, W3, b3 per subnet, matrices row-major. No
/// header; the reader supplies (subnet_count, dims).
void write_params_bin(const NetParams& params, const std::string& path);
NetParams read_params_bin(const std::string& path, int subnet_count, NetDims dims);

/// Writes lines joined by '\n' with a trailing newline.
void write_text_file(const std::string& path, const std::vector<std::string>& lines);

}  // namespace ritz
