#pragma once

#include <string>
#include <string_view>

namespace lab {

// Hex digest of the FIPS 180-4 SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

}  // namespace lab
