#pragma once

#include <blocksim/netsim/config.hpp>

#include <json.hpp>

#include <set>
#include <string>

namespace blocksim {

/// Strict view over one JSON object: rejects keys outside `allowed`.
class JsonFields
{
public:
    JsonFields(const nlohmann::json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        for (const auto& [key, _] : j_.items()) {
            if (!allowed.count(key)) throw ConfigError(qualified(key), "unknown key");
        }
    }

    template <class T>
    void read(const char* key, T& out) const
    {
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(qualified(key), "wrong type");
        }
    }

    bool has(const char* key) const { return j_.contains(key); }
    const nlohmann::json& at(const char* key) const { return j_.at(key); }
    std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    const nlohmann::json& j_;
    std::string path_;
};

} // namespace blocksim
