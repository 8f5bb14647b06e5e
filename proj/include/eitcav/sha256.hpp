#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace eitcav {

/// Hex digest of the SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Hex digest of a file's contents. Throws std::runtime_error on IO failure.
std::string sha256_file(const std::string& path);

}  // namespace eitcav
