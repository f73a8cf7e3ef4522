#ifndef MHS_CACHE_HPP
#define MHS_CACHE_HPP

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

namespace mhs {

/**
 * One file per key under the cache directory, human-readable JSON wrapping the
 * payload verbatim. Hits replay the stored payload byte-identically; the
 * timestamp lives in the wrapper only, never in the payload.
 */
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir, int schema_version)
        : dir_(std::move(dir)), version_(schema_version) {}

    std::optional<std::string> get(const std::string& key) const {
        std::ifstream in(path_for(key));
        if (!in) return std::nullopt;
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception&) {
            return std::nullopt;  // unreadable entries are treated as misses
        }
        if (!j.contains("key") || j["key"] != key) return std::nullopt;
        if (!j.contains("schema_version") || j["schema_version"] != version_) return std::nullopt;
        if (!j.contains("payload") || !j["payload"].is_string()) return std::nullopt;
        return j["payload"].get<std::string>();
    }

    void put(const std::string& key, const std::string& payload) const {
        std::filesystem::create_directories(dir_);
        nlohmann::json j{{"key", key},
                         {"schema_version", version_},
                         {"created", now_iso()},
                         {"payload", payload}};
        std::ofstream out(path_for(key));
        out << j.dump(2) << "\n";
    }

    std::filesystem::path path_for(const std::string& key) const {
        std::string name;
        for (char c : key)
            name += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
        // append a short hash so distinct keys cannot collide after sanitizing
        std::uint64_t h = 1469598103934665603ull;
        for (char c : key) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        char suffix[20];
        std::snprintf(suffix, sizeof suffix, "-%016llx", static_cast<unsigned long long>(h));
        return dir_ / (name + suffix + ".json");
    }

private:
    std::filesystem::path dir_;
    int version_;

    static std::string now_iso() {
        auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        return buf;
    }
};

} // namespace mhs

#endif
