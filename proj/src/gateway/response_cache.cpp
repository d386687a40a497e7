#include "gateway/response_cache.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "core/error.hpp"
#include "gateway/sha256.hpp"

namespace captem::gateway {

using nlohmann::json;

namespace {

bool is_record_name(const std::string& name) {
  if (name.size() != 64) return false;
  for (char c : name) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string cache_key(const CacheKeyParts& parts) {
  const std::string version = std::to_string(parts.template_version);
  std::string buf;
  for (const std::string* field :
       {&parts.model_name, &parts.template_name, &version, &parts.prompt}) {
    buf += std::to_string(field->size());
    buf.push_back(':');
    buf += *field;
    buf.push_back('\n');
  }
  return sha256_hex(buf);
}

std::string record_to_json(const CacheRecord& r) {
  json j = {
      {"key", r.key},
      {"model", r.model_name},
      {"template", r.template_name},
      {"template_version", r.template_version},
      {"prompt", r.prompt},
      {"reply", r.reply},
      {"created_at", r.created_at},
      {"protocol_status", r.protocol_status},
  };
  return j.dump(2) + "\n";
}

std::optional<CacheRecord> record_from_json(const std::string& text) {
  const json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return std::nullopt;
  try {
    CacheRecord r;
    r.key = j.at("key").get<std::string>();
    r.model_name = j.value("model", "");
    r.template_name = j.value("template", "");
    r.template_version = j.value("template_version", 0);
    r.prompt = j.value("prompt", "");
    r.reply = j.at("reply").get<std::string>();
    r.created_at = j.at("created_at").get<std::int64_t>();
    r.protocol_status = j.value("protocol_status", 0);
    return r;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw Error(ErrorCode::kIo,
                fmt::format("cache dir {} is not usable: {}", dir_.string(), ec.message()));
  }
}

std::optional<CacheRecord> ResponseCache::lookup(const std::string& key) const {
  const auto text = read_file(path_for(key));
  if (!text) return std::nullopt;
  auto record = record_from_json(*text);
  if (!record || record->key != key) return std::nullopt;
  return record;
}

bool ResponseCache::store(const CacheRecord& record) const {
  const auto final_path = path_for(record.key);
  if (std::filesystem::exists(final_path)) return false;

  static std::atomic<unsigned long long> counter{0};
  const auto tmp = dir_ / fmt::format(".tmp-{}-{}-{}", record.key,
                                      std::hash<std::thread::id>{}(std::this_thread::get_id()),
                                      counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write cache temp file " + tmp.string());
    out << record_to_json(record);
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, final_path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot publish cache record " + final_path.string());
  }
  return true;
}

std::size_t purge_cache(const std::filesystem::path& dir, std::chrono::seconds older_than,
                        std::int64_t now_unix) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "cache dir does not exist: " + dir.string());
  }
  std::size_t removed = 0;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot list " + dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_regular_file() || !is_record_name(entry.path().filename().string())) continue;
    const auto text = read_file(entry.path());
    if (!text) continue;
    const auto record = record_from_json(*text);
    if (!record) continue;
    if (now_unix - record->created_at > older_than.count()) {
      if (!std::filesystem::remove(entry.path(), ec) || ec) {
        throw Error(ErrorCode::kIo, "cannot remove " + entry.path().string());
      }
      ++removed;
    }
  }
  return removed;
}

std::size_t purge_cache(const std::filesystem::path& dir, std::chrono::seconds older_than) {
  const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  return purge_cache(dir, older_than, now);
}

}  // namespace captem::gateway
