#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace photonfluid {

/// Incremental SHA-256 producing a lowercase hex digest.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::span<const std::byte> bytes);
  Sha256& update(std::string_view text);
  std::string hex();

 private:
  void* ctx_;
};

std::string sha256_hex(std::string_view text);

}  // namespace photonfluid
