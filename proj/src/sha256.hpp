#pragma once

#include <string>
#include <string_view>

namespace airs {

// FIPS 180-4 SHA-256, returned as lowercase hex. Self-contained so the
// shared library stays dependency-free.
std::string sha256_hex(std::string_view data);

}  // namespace airs
