#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace longweave {

// SHA-256 hex digest of a byte string.
std::string sha256_hex(std::string_view data);

// First 8 bytes of sha256(data), big-endian. Used to derive RNG streams.
std::uint64_t sha256_prefix64(std::string_view data);

// splitmix64 step; good enough to combine small integer fields into a seed.
std::uint64_t mix64(std::uint64_t x);

} // namespace longweave
