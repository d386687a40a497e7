#include "harness/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "core/error.hpp"

namespace captem::harness {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(value), &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kConfig, fmt::format("{}: '{}' is not a number", key, value));
}

long long to_int(std::string_view key, std::string_view value) {
  long long v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kConfig, fmt::format("{}: '{}' is not an integer", key, value));
  }
  return v;
}

void assign(HarnessConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    value = value.substr(1, value.size() - 2);
  }
  if (key == "base_url") {
    c.gateway.base_url = std::string(value);
  } else if (key == "model") {
    c.gateway.model_name = std::string(value);
  } else if (key == "api_key_env") {
    c.gateway.api_key_env = std::string(value);
  } else if (key == "timeout") {
    c.gateway.timeout_s = to_double(key, value);
  } else if (key == "max_retries") {
    c.gateway.max_retries = static_cast<int>(to_int(key, value));
  } else if (key == "backoff_base") {
    c.gateway.backoff_base_s = to_double(key, value);
  } else if (key == "max_in_flight") {
    c.gateway.max_in_flight = static_cast<int>(to_int(key, value));
  } else if (key == "cache_dir") {
    c.gateway.cache_dir = std::string(value);
  } else if (key == "temperature") {
    c.gateway.temperature = to_double(key, value);
  } else if (key == "template_dir") {
    c.template_dir = std::string(value);
  } else if (key == "workers") {
    const auto w = to_int(key, value);
    if (w < 1) throw Error(ErrorCode::kConfig, "workers must be >= 1");
    c.workers = static_cast<std::size_t>(w);
  } else if (key == "rouge_beta") {
    c.rouge_beta = to_double(key, value);
  } else if (key == "cider_scale") {
    c.cider_scale = to_double(key, value);
  } else if (key == "lambda") {
    c.association.lambda = to_double(key, value);
  } else if (key == "cost_gate") {
    c.association.cost_gate = to_double(key, value);
  } else if (key == "max_age") {
    c.association.max_age = static_cast<int>(to_int(key, value));
  } else {
    throw Error(ErrorCode::kConfig, fmt::format("unknown config key '{}'", key));
  }
}

}  // namespace

void HarnessConfig::set(std::string_view key, std::string_view value) {
  HarnessConfig next = *this;
  assign(next, key, value);
  next.validate();
  *this = std::move(next);
}

HarnessConfig HarnessConfig::parse(std::string_view text, const std::string& origin) {
  HarnessConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of("=:");
    if (sep == std::string_view::npos) {
      throw Error(ErrorCode::kConfig,
                  fmt::format("{}:{}: expected 'key = value', got '{}'", origin, lineno, line));
    }
    try {
      cfg.set(trim(line.substr(0, sep)), line.substr(sep + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, fmt::format("{}:{}: {}", origin, lineno, e.what()));
    }
  }
  cfg.validate();
  return cfg;
}

HarnessConfig HarnessConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void HarnessConfig::validate() const {
  gateway.validate();
  if (!(rouge_beta > 0.0)) throw Error(ErrorCode::kConfig, "rouge_beta must be > 0");
  if (!(cider_scale > 0.0)) throw Error(ErrorCode::kConfig, "cider_scale must be > 0");
  if (association.lambda < 0.0 || association.lambda > 1.0) {
    throw Error(ErrorCode::kConfig, "lambda must lie in [0, 1]");
  }
  if (!(association.cost_gate > 0.0)) throw Error(ErrorCode::kConfig, "cost_gate must be > 0");
  if (association.max_age < 1) throw Error(ErrorCode::kConfig, "max_age must be >= 1");
}

std::string HarnessConfig::canonical() const {
  const std::map<std::string, std::string> kv = {
      {"base_url", gateway.base_url},
      {"model", gateway.model_name},
      {"temperature", fmt::format("{}", gateway.temperature)},
      {"rouge_beta", fmt::format("{}", rouge_beta)},
      {"cider_scale", fmt::format("{}", cider_scale)},
      {"lambda", fmt::format("{}", association.lambda)},
      {"cost_gate", fmt::format("{}", association.cost_gate)},
      {"max_age", std::to_string(association.max_age)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

}  // namespace captem::harness
