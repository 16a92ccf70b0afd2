#pragma once

#include "bgiopt/catchment.hpp"
#include "bgiopt/flood.hpp"
#include "bgiopt/genome.hpp"
#include "bgiopt/risk.hpp"
#include "bgiopt/storm.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

namespace bgi {

/// Incremental SHA-256 (OpenSSL). Numbers are hashed as their IEEE-754 bit patterns.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& bytes(std::span<const std::uint8_t> data);
    Sha256& str(std::string_view s); // length-prefixed
    Sha256& num(double v);
    Sha256& num(std::uint64_t v);
    std::string hex();

private:
    void* ctx_;
};

std::string digest(const Catchment& catchment);
std::string digest(const DamageCurves& curves);
std::string digest(const DesignStorm& storm);
std::string digest(const FloodParams& params);
std::string cache_key(std::string_view scenario_digest, std::string_view storm_digest, const Genome& genome);

/// DDC results keyed by content digest. Lookups may run concurrently; inserts
/// are serialised and, when a file is given, appended to it as
/// `key<TAB>hexfloat` so later runs can resume.
class SimulationCache {
public:
    SimulationCache() = default;
    explicit SimulationCache(std::filesystem::path file);

    std::optional<double> lookup(const std::string& key) const;
    void insert(const std::string& key, double ddc);

    std::size_t size() const;
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, double> entries_;
    std::filesystem::path file_;
    mutable std::atomic<std::size_t> hits_{0};
    mutable std::atomic<std::size_t> misses_{0};
};

} // namespace bgi
