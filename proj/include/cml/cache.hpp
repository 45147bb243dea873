#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace cml {

std::string fnv1a64_hex(const std::string& bytes);

// Content-addressed result cache: one file per key hash, holding the exact
// report bytes plus the full key for collision-proof verification. Writes go
// through a temp file and an atomic rename under an exclusive lock; hits
// return byte-identical reports.
class ResultCache {
  public:
    explicit ResultCache(std::string dir) : dir_(std::move(dir)) {}

    static std::string default_dir(); // $CML_CACHE or ./.cml-cache

    std::string key_hash(const nlohmann::json& key) const;
    std::optional<std::string> lookup(const nlohmann::json& key) const;
    void store(const nlohmann::json& key, const std::string& report_bytes) const;

    const std::string& dir() const { return dir_; }

  private:
    std::string dir_;
};

} // namespace cml
