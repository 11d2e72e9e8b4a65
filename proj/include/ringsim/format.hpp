#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ringsim {

/// Shortest decimal form with 17 significant digits ("nan", "inf" for
/// non-finite values). Locale independent.
std::string fmt17(double x);

/// 64-bit FNV-1a, rendered as 16 hex digits. Used for cache keys and
/// manifest digests; not a cryptographic hash.
std::string digest_hex(std::string_view data);

}  // namespace ringsim
