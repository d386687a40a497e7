#pragma once

#include <string>
#include <string_view>

namespace captem::gateway {

/// Lowercase hex SHA-256 digest of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace captem::gateway
