#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace captem::gateway {

struct CacheKeyParts {
  std::string model_name;
  std::string template_name;
  int template_version = 0;
  std::string prompt;
};

struct CacheRecord {
  std::string key;
  std::string model_name;
  std::string template_name;
  int template_version = 0;
  std::string prompt;
  std::string reply;
  std::int64_t created_at = 0;  // Unix seconds, UTC
  int protocol_status = 0;
};

/// SHA-256 over a length-delimited encoding of the parts.
std::string cache_key(const CacheKeyParts& parts);

/// One JSON file per record, named by the 64-char hex key. Records are never
/// rewritten once present; writes go through a temp file and a rename.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }

  std::optional<CacheRecord> lookup(const std::string& key) const;

  /// Returns false if a record with that key already existed.
  bool store(const CacheRecord& record) const;

  std::filesystem::path path_for(const std::string& key) const { return dir_ / key; }

 private:
  std::filesystem::path dir_;
};

std::string record_to_json(const CacheRecord& record);
std::optional<CacheRecord> record_from_json(const std::string& text);

/// Removes records whose age (now - created_at) is strictly greater than
/// `older_than`. Non-record files are ignored. Throws Error(kIo).
std::size_t purge_cache(const std::filesystem::path& dir, std::chrono::seconds older_than,
                        std::int64_t now_unix);
std::size_t purge_cache(const std::filesystem::path& dir, std::chrono::seconds older_than);

}  // namespace captem::gateway
