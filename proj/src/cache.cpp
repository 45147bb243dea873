#include "cml/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

namespace cml {

std::string fnv1a64_hex(const std::string& bytes) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string ResultCache::default_dir() {
    if (const char* env = std::getenv("CML_CACHE"); env && *env) return env;
    return ".cml-cache";
}

std::string ResultCache::key_hash(const nlohmann::json& key) const { return fnv1a64_hex(key.dump()); }

std::optional<std::string> ResultCache::lookup(const nlohmann::json& key) const {
    const std::string path = dir_ + "/" + key_hash(key) + ".json";
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json entry = nlohmann::json::parse(ss.str(), nullptr, false);
    if (entry.is_discarded()) return std::nullopt;
    // hash collision guard: the stored key must match exactly
    if (entry.value("key", nlohmann::json()) != key) return std::nullopt;
    if (!entry.contains("report_text")) return std::nullopt;
    return entry.at("report_text").get<std::string>();
}

void ResultCache::store(const nlohmann::json& key, const std::string& report_bytes) const {
    ::mkdir(dir_.c_str(), 0755);
    const std::string lock_path = dir_ + "/.lock";
    const int lock_fd = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
    if (lock_fd >= 0) ::flock(lock_fd, LOCK_EX);

    nlohmann::json entry;
    entry["key"] = key;
    entry["report_text"] = report_bytes;
    const std::string payload = entry.dump();
    const std::string path = dir_ + "/" + key_hash(key) + ".json";
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << payload;
    }
    ::rename(tmp.c_str(), path.c_str());

    if (lock_fd >= 0) {
        ::flock(lock_fd, LOCK_UN);
        ::close(lock_fd);
    }
}

} // namespace cml
