#include "bgiopt/cache.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <thread>

using namespace bgi;
using testing_util::fresh_dir;

TEST(Sha256, KnownVectors)
{
    const std::string abc = "abc";
    Sha256 h;
    h.bytes({reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()});
    EXPECT_EQ(h.hex(), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(Sha256().hex(), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Sha256, StringsAreLengthPrefixed)
{
    EXPECT_NE(Sha256().str("ab").str("c").hex(), Sha256().str("a").str("bc").hex());
    EXPECT_NE(Sha256().num(0.0).hex(), Sha256().num(-0.0).hex());
}

TEST(CacheKey, SensitiveToEveryInput)
{
    const Genome g = Genome::from_bits("0110");
    const auto base = cache_key("scenario", "storm", g);
    EXPECT_EQ(base, cache_key("scenario", "storm", g));
    EXPECT_NE(base, cache_key("scenario2", "storm", g));
    EXPECT_NE(base, cache_key("scenario", "storm2", g));
    EXPECT_NE(base, cache_key("scenario", "storm", Genome::from_bits("0111")));
    EXPECT_NE(base, cache_key("scenario", "storm", Genome::from_bits("01100")));
    EXPECT_EQ(base.size(), 64U);
}

TEST(Digest, StormAndParams)
{
    auto s = testing_util::uniform_storm(10.0, 600.0, 2);
    const auto d = digest(s);
    s.steps[1].intensity_mm_per_hr = 10.000001;
    EXPECT_NE(digest(s), d);
    FloodParams p;
    const auto dp = digest(p);
    p.settle_time += 1.0;
    EXPECT_NE(digest(p), dp);
    p = {};
    p.boundary = Boundary::open;
    EXPECT_NE(digest(p), dp);
}

TEST(Digest, Catchment)
{
    const auto dem = testing_util::make_raster(4, 4, 1.0, [](int r, int c) { return r + 0.1 * c; });
    const auto a = assemble_catchment(dem, {}, {}, {testing_util::zone(1, testing_util::rect(0, 0, 2, 2))});
    const auto b = assemble_catchment(dem, {}, {}, {testing_util::zone(1, testing_util::rect(0, 0, 3, 2))});
    EXPECT_EQ(digest(a), digest(assemble_catchment(dem, {}, {}, {testing_util::zone(1, testing_util::rect(0, 0, 2, 2))})));
    EXPECT_NE(digest(a), digest(b));
}

TEST(SimulationCache, InMemory)
{
    SimulationCache c;
    EXPECT_FALSE(c.lookup("k").has_value());
    c.insert("k", 1.5);
    EXPECT_EQ(*c.lookup("k"), 1.5);
    EXPECT_EQ(c.size(), 1U);
    EXPECT_EQ(c.hits(), 1U);
    EXPECT_EQ(c.misses(), 1U);
}

TEST(SimulationCache, PersistsExactValues)
{
    const auto dir = fresh_dir("cache_persist");
    const auto file = dir / "cache.tsv";
    const double v = 0.1 + 0.2;
    {
        SimulationCache c(file);
        c.insert("a", v);
        c.insert("b", 1e-300);
    }
    {
        std::ofstream out(file, std::ios::app);
        out << "garbage line\n";
    }
    SimulationCache again(file);
    EXPECT_EQ(again.size(), 2U);
    EXPECT_EQ(*again.lookup("a"), v);
    EXPECT_EQ(*again.lookup("b"), 1e-300);
}

TEST(SimulationCache, ConcurrentLookupsAndInserts)
{
    SimulationCache c;
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&c, t] {
            for (int i = 0; i < 500; ++i) {
                const auto key = std::to_string(t) + ":" + std::to_string(i);
                c.insert(key, i);
                EXPECT_EQ(*c.lookup(key), i);
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    EXPECT_EQ(c.size(), 2000U);
}
