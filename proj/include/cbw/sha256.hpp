#ifndef CBW_SHA256_HPP
#define CBW_SHA256_HPP

#include <string>

namespace cbw {

/// Hex digest of the given bytes.
std::string sha256_hex(const std::string& data);

}  // namespace cbw

#endif  // CBW_SHA256_HPP
