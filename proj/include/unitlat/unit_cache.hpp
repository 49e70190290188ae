#pragma once

// Persistent cache of fundamental units, keyed by d. Integers are stored as
// decimal strings; regulators are never cached.

#include <gmpxx.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <unistd.h>

#include "unitlat/biquad.hpp"
#include "unitlat/errors.hpp"
#include "unitlat/quadratic.hpp"

namespace unitlat {

class UnitCache {
 public:
  static constexpr const char* kSchema = "unitlat-cache/1";

  /// Loads `path` if it exists; an empty path gives an in-memory cache.
  explicit UnitCache(std::filesystem::path path = {}) : path_(std::move(path)) {
    if (!path_.empty() && std::filesystem::exists(path_)) load();
  }

  /// The cache path from the flag value, else from UNITLAT_CACHE.
  static std::filesystem::path resolve_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("UNITLAT_CACHE"); env != nullptr && *env != '\0') return env;
    return {};
  }

  std::optional<QuadUnit> get(SquarefreeD d) const {
    std::shared_lock lock(mutex_);
    auto it = units_.find(d.value());
    if (it == units_.end()) return std::nullopt;
    return it->second;
  }

  void put(const QuadUnit& u) {
    std::unique_lock lock(mutex_);
    auto [it, inserted] = units_.emplace(u.d.value(), u);
    if (inserted) dirty_ = true;
  }

  /// Cached unit, or the continued-fraction unit (then cached).
  QuadUnit unit(SquarefreeD d) {
    if (auto u = get(d)) return *u;
    QuadUnit u = fundamental_unit(d);
    put(u);
    return u;
  }

  UnitSource source() {
    return [this](SquarefreeD d) { return unit(d); };
  }

  size_t size() const {
    std::shared_lock lock(mutex_);
    return units_.size();
  }

  /// Writes the cache atomically (temporary file, then rename).
  void flush() {
    std::unique_lock lock(mutex_);
    if (path_.empty() || !dirty_) return;
    nlohmann::json units = nlohmann::json::object();
    for (const auto& [d, u] : units_) {
      units[std::to_string(d)] = {{"x", u.x.get_str()}, {"y", u.y.get_str()}, {"q", u.q}, {"norm", u.norm}};
    }
    nlohmann::json doc = {{"schema", kSchema}, {"units", units}};
    const auto tmp = path_.string() + ".tmp." + std::to_string(::getpid());
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw Error("cannot write unit cache " + tmp);
      out << doc.dump(1) << "\n";
      if (!out.flush()) throw Error("cannot write unit cache " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path_, ec);
    if (ec) {
      std::filesystem::remove(tmp);
      throw Error("cannot replace unit cache " + path_.string() + ": " + ec.message());
    }
    dirty_ = false;
  }

 private:
  void load() {
    std::ifstream in(path_);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw Error("unit cache " + path_.string() + " is not valid JSON: " + e.what());
    }
    if (doc.value("schema", "") != kSchema) throw Error("unit cache " + path_.string() + " has an unknown schema");
    for (const auto& [key, v] : doc.at("units").items()) {
      QuadUnit u;
      try {
        u.d = SquarefreeD::make(std::stoll(key));
        u.x = mpz_class(v.at("x").get<std::string>());
        u.y = mpz_class(v.at("y").get<std::string>());
        u.q = v.at("q").get<int>();
        u.norm = v.at("norm").get<int>();
      } catch (const std::exception& e) {
        throw Error("unit cache entry " + key + " is malformed: " + e.what());
      }
      // Entries that fail the norm equation are dropped and recomputed.
      if ((u.q == 1 || u.q == 2) && u.x > 0 && u.y > 0 && u.satisfies_norm_equation()) {
        units_.emplace(u.d.value(), u);
      } else {
        dirty_ = true;
      }
    }
  }

  std::filesystem::path path_;
  mutable std::shared_mutex mutex_;
  std::map<std::int64_t, QuadUnit> units_;
  bool dirty_ = false;
};

}  // namespace unitlat
