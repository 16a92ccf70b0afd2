#include "bgiopt/cache.hpp"

#include "bgiopt/errors.hpp"
#include "bgiopt/text.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdio>
#include <fstream>

namespace bgi {

Sha256::Sha256() : ctx_(EVP_MD_CTX_new())
{
    if (ctx_ == nullptr || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 initialisation failed");
    }
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

Sha256& Sha256::bytes(std::span<const std::uint8_t> data)
{
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size());
    return *this;
}

Sha256& Sha256::num(std::uint64_t v)
{
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
    return bytes(buf);
}

Sha256& Sha256::num(double v) { return num(std::bit_cast<std::uint64_t>(v)); }

Sha256& Sha256::str(std::string_view s)
{
    num(static_cast<std::uint64_t>(s.size()));
    return bytes({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

std::string Sha256::hex()
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), md, &len);
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += digits[md[i] >> 4];
        out += digits[md[i] & 0xf];
    }
    return out;
}

namespace {

void hash_polygon(Sha256& h, const Polygon& p)
{
    h.num(static_cast<std::uint64_t>(p.rings.size()));
    for (const auto& ring : p.rings) {
        h.num(static_cast<std::uint64_t>(ring.size()));
        for (const auto& pt : ring) {
            h.num(pt.x).num(pt.y);
        }
    }
}

void hash_curve(Sha256& h, const std::optional<DamageCurve>& c)
{
    if (!c) {
        h.str("none");
        return;
    }
    h.num(static_cast<std::uint64_t>(c->depth.size()));
    for (std::size_t i = 0; i < c->depth.size(); ++i) {
        h.num(c->depth[i]).num(c->damage[i]);
    }
}

} // namespace

std::string digest(const Catchment& c)
{
    Sha256 h;
    h.str("catchment");
    h.num(static_cast<std::uint64_t>(c.grid.ncols)).num(static_cast<std::uint64_t>(c.grid.nrows));
    h.num(c.grid.xll).num(c.grid.yll).num(c.grid.cellsize);
    for (const double z : c.elevation) {
        h.num(z);
    }
    h.bytes({reinterpret_cast<const std::uint8_t*>(c.mask.data()), c.mask.size()});
    h.num(static_cast<std::uint64_t>(c.buildings.size()));
    for (const auto& b : c.buildings) {
        h.str(b.id).str(to_string(b.category));
        hash_polygon(h, b.footprint);
    }
    h.num(static_cast<std::uint64_t>(c.zones.size()));
    for (const auto& z : c.zones) {
        h.num(static_cast<std::uint64_t>(z.index)).num(static_cast<std::uint64_t>(z.cells.size()));
        for (const auto cell : z.cells) {
            h.num(static_cast<std::uint64_t>(cell));
        }
    }
    return h.hex();
}

std::string digest(const DamageCurves& curves)
{
    Sha256 h;
    h.str("curves");
    hash_curve(h, curves.residential);
    hash_curve(h, curves.non_residential);
    return h.hex();
}

std::string digest(const DesignStorm& storm)
{
    Sha256 h;
    h.str("storm");
    h.num(static_cast<std::uint64_t>(storm.steps.size()));
    for (const auto& s : storm.steps) {
        h.num(s.interval_s).num(s.intensity_mm_per_hr);
    }
    return h.hex();
}

std::string digest(const FloodParams& p)
{
    Sha256 h;
    h.str("flood");
    h.num(p.manning_impervious).num(p.manning_green).num(p.manning_permeable);
    h.num(p.infil_green).num(p.infil_permeable_active).num(p.infil_impervious);
    h.num(p.cfl_alpha).num(p.dt_min).num(p.dt_max).num(p.settle_time);
    h.str(to_string(p.boundary)).num(p.min_flow_depth).num(p.open_edge_slope);
    return h.hex();
}

std::string cache_key(std::string_view scenario_digest, std::string_view storm_digest, const Genome& genome)
{
    Sha256 h;
    h.str(scenario_digest).str(storm_digest).num(static_cast<std::uint64_t>(genome.size())).bytes(genome.bytes());
    return h.hex();
}

SimulationCache::SimulationCache(std::filesystem::path file) : file_(std::move(file))
{
    std::ifstream in(file_);
    if (!in) {
        return;
    }
    std::string line;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            continue; // torn write from an interrupted run
        }
        char* end = nullptr;
        const std::string value = line.substr(tab + 1);
        const double v = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0') {
            continue;
        }
        entries_[line.substr(0, tab)] = v;
    }
}

std::optional<double> SimulationCache::lookup(const std::string& key) const
{
    std::shared_lock lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    return it->second;
}

void SimulationCache::insert(const std::string& key, double ddc)
{
    std::unique_lock lock(mutex_);
    if (!entries_.emplace(key, ddc).second) {
        return;
    }
    if (!file_.empty()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%a", ddc);
        std::ofstream out(file_, std::ios::app);
        out << key << '\t' << buf << '\n';
    }
}

std::size_t SimulationCache::size() const
{
    std::shared_lock lock(mutex_);
    return entries_.size();
}

} // namespace bgi
