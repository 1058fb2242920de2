#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "mgn/coefficients.hpp"
#include "mgn/errors.hpp"
#include "mgn/oracles.hpp"
#include "mgn/recursion.hpp"

using namespace mgn;

TEST_CASE("base cases and named values") {
    RecursionEngine engine;
    CHECK(engine.intersection_number(canonicalize(0, 0, {0, 0, 0})) == Rational(1));
    CHECK(engine.intersection_number(canonicalize(1, 0, {1})) == make_rational(1, 24));
    CHECK(engine.intersection_number(canonicalize(1, 1, {0})) == make_rational(1, 24));
    CHECK(engine.intersection_number(canonicalize(1, 0, {2, 0})) == make_rational(1, 24));
    CHECK(engine.intersection_number(canonicalize(0, 1, {0, 0, 0, 0})) == Rational(1));
    CHECK(engine.intersection_number(canonicalize(1, 2, {0, 0})) == make_rational(1, 8));
    CHECK(engine.intersection_number(canonicalize(2, 0, {4})) == make_rational(1, 1152));
    CHECK(engine.intersection_number(canonicalize(1, 1, {1, 0})) == make_rational(1, 12));
    CHECK(engine.intersection_number(canonicalize(1, 0, {1, 1})) == make_rational(1, 24));
}

TEST_CASE("dimension filter zeroes mismatched keys without recursion") {
    RecursionEngine engine;
    CHECK(engine.intersection_number(canonicalize(1, 1, {1})) == Rational(0));
    CHECK(engine.intersection_number(canonicalize(2, 0, {0})) == Rational(0));
    CHECK(engine.intersection_number(canonicalize(0, 3, {0, 0, 0})) == Rational(0));
    CHECK(engine.cache_stats().entries == 0);
}

TEST_CASE("higher values agree with the kappa-reduction oracle") {
    RecursionEngine engine;
    // frozen chain values, cross-checked against reduction + DVV
    CHECK(engine.intersection_number(canonicalize(2, 1, {3})) == make_rational(29, 5760));
    CHECK(engine.intersection_number(canonicalize(2, 2, {2})) == make_rational(139, 5760));
    CHECK(engine.intersection_number(canonicalize(2, 3, {1})) == make_rational(169, 1920));
    CHECK(engine.intersection_number(canonicalize(2, 4, {0})) == make_rational(29, 128));
    CHECK(engine.intersection_number(canonicalize(0, 1, {1, 0, 0, 0, 0})) == Rational(3));
    CHECK(engine.intersection_number(canonicalize(0, 2, {0, 0, 0, 0, 0})) == Rational(5));
    CHECK(engine.intersection_number(canonicalize(1, 1, {1, 1, 0})) == make_rational(1, 4));
    CHECK(engine.intersection_number(canonicalize(1, 2, {1, 0, 0})) == make_rational(13, 24));
}

TEST_CASE("recursion_terms decomposition") {
    RecursionEngine engine;
    SUBCASE("<tau2 tau0>_1") {
        TermBreakdown terms = engine.recursion_terms(canonicalize(1, 0, {2, 0}));
        CHECK(terms.lhs_factor == 15);
        REQUIRE(terms.boundary_terms.size() == 2);
        CHECK(terms.boundary_terms[0].first == "merge j=2, l=0");
        CHECK(terms.boundary_terms[0].second == make_rational(1, 8));
        CHECK(terms.boundary_terms[1].first == "nonsep d=(0,0), l=0");
        CHECK(terms.boundary_terms[1].second == make_rational(1, 2));
    }
    SUBCASE("<kappa1 tau0^4>_0: three merge terms of 1/3") {
        TermBreakdown terms = engine.recursion_terms(canonicalize(0, 1, {0, 0, 0, 0}));
        REQUIRE(terms.boundary_terms.size() == 3);
        for (const auto& [label, value] : terms.boundary_terms) {
            CHECK(label.substr(0, 5) == "merge");
            CHECK(value == make_rational(1, 3));
        }
    }
    SUBCASE("<tau1 tau0^3>_0: three merge terms of 1") {
        TermBreakdown terms = engine.recursion_terms(canonicalize(0, 0, {1, 0, 0, 0}));
        REQUIRE(terms.boundary_terms.size() == 3);
        Rational sum = 0;
        for (const auto& [label, value] : terms.boundary_terms) {
            CHECK(value == Rational(1));
            sum += value;
        }
        CHECK(sum == Rational(terms.lhs_factor) *
                         engine.intersection_number(canonicalize(0, 0, {1, 0, 0, 0})));
    }
    SUBCASE("base keys are rejected") {
        CHECK_THROWS_AS(engine.recursion_terms(canonicalize(0, 0, {0, 0, 0})), BaseCaseError);
        CHECK_THROWS_AS(engine.recursion_terms(canonicalize(1, 0, {1})), BaseCaseError);
    }
}

TEST_CASE("recursion_terms sums to (2k1+1)!! * value for dim <= 5") {
    RecursionEngine engine;
    for (const CorrelatorKey& key : enumerate_keys(5, 3, 8)) {
        if ((key.g == 0 && key.n() == 3) || (key.g == 1 && key.n() == 1)) {
            continue;
        }
        TermBreakdown terms = engine.recursion_terms(key);
        Rational sum = 0;
        for (const auto& [label, value] : terms.boundary_terms) {
            sum += value;
        }
        CAPTURE(print_correlator(key));
        CHECK(sum == Rational(terms.lhs_factor) * engine.intersection_number(key));
    }
}

TEST_CASE("DVV specialization: k0 = 0 matches the independent oracle up to dim 6") {
    RecursionEngine engine;
    DvvEngine oracle;
    for (const CorrelatorKey& key : enumerate_keys(6, 2, 9)) {
        if (key.k0 != 0) {
            continue;
        }
        CAPTURE(print_correlator(key));
        CHECK(engine.intersection_number(key) == oracle.intersection(key.g, key.ks));
    }
}

TEST_CASE("kappa oracle equivalence: dim <= 5, 1 <= k0 <= 3") {
    RecursionEngine engine;
    for (const CorrelatorKey& key : enumerate_keys(5, 2, 8)) {
        if (key.k0 < 1 || key.k0 > 3) {
            continue;
        }
        CAPTURE(print_correlator(key));
        CHECK(engine.intersection_number(key) == oracle_intersection(key));
    }
}

TEST_CASE("permutation invariance through canonicalization") {
    RecursionEngine engine;
    std::mt19937 rng(99);
    auto keys = enumerate_keys(5, 3, 7);
    for (int trial = 0; trial < 50; ++trial) {
        const CorrelatorKey& key = keys[rng() % keys.size()];
        std::vector<int> shuffled = key.ks;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(engine.intersection_number(canonicalize(key.g, key.k0, shuffled)) ==
              engine.intersection_number(key));
    }
}

TEST_CASE("first-slot independence") {
    RecursionEngine engine;
    for (const CorrelatorKey& key : enumerate_keys(5, 3, 7)) {
        Rational base = engine.intersection_number(key);
        std::set<int> distinct(key.ks.begin(), key.ks.end());
        for (int v : distinct) {
            CAPTURE(print_correlator(key));
            CAPTURE(v);
            CHECK(engine.intersection_number_first_slot(key, v) == base);
        }
    }
    CHECK_THROWS_AS(engine.intersection_number_first_slot(canonicalize(1, 0, {2, 0}), 5),
                    InvalidDomain);
}

TEST_CASE("string and dilaton equations hold for engine values, dim <= 6") {
    RecursionEngine engine;
    for (const CorrelatorKey& key : enumerate_keys(6, 2, 9)) {
        if (key.k0 != 0) {
            continue;
        }
        // string
        std::vector<int> with0 = key.ks;
        with0.push_back(0);
        Rational lhs = engine.intersection_number(canonicalize(key.g, 0, with0));
        Rational rhs = 0;
        for (std::size_t j = 0; j < key.ks.size(); ++j) {
            if (key.ks[j] == 0) {
                continue;
            }
            std::vector<int> sub = key.ks;
            sub[j] -= 1;
            rhs += engine.intersection_number(canonicalize(key.g, 0, sub));
        }
        CAPTURE(print_correlator(key));
        CHECK(lhs == rhs);
        // dilaton
        std::vector<int> with1 = key.ks;
        with1.push_back(1);
        CHECK(engine.intersection_number(canonicalize(key.g, 0, with1)) ==
              Rational(2 * key.g - 2 + key.n()) * engine.intersection_number(key));
    }
}

TEST_CASE("compute_table enumeration and values") {
    RecursionEngine engine;
    SUBCASE("only dim-0 key at (0,3)") {
        auto table = engine.compute_table(0, 0, 3);
        REQUIRE(table.size() == 1);
        CHECK(table[0].first == canonicalize(0, 0, {0, 0, 0}));
        CHECK(table[0].second == Rational(1));
    }
    SUBCASE("(1,1,1) base cases") {
        auto table = engine.compute_table(1, 1, 1);
        REQUIRE(table.size() == 2);
        CHECK(table[0].first == canonicalize(1, 0, {1}));
        CHECK(table[0].second == make_rational(1, 24));
        CHECK(table[1].first == canonicalize(1, 1, {0}));
        CHECK(table[1].second == make_rational(1, 24));
    }
    SUBCASE("(2,1,2) matches the expected key set") {
        auto table = engine.compute_table(2, 1, 2);
        auto value_of = [&](const CorrelatorKey& key) -> Rational {
            for (const auto& [k, v] : table) {
                if (k == key) {
                    return v;
                }
            }
            FAIL("key missing: " << print_correlator(key));
            return 0;
        };
        CHECK(value_of(canonicalize(1, 0, {2, 0})) == make_rational(1, 24));
        CHECK(value_of(canonicalize(1, 1, {1, 0})) == make_rational(1, 12));
        CHECK(value_of(canonicalize(1, 2, {0, 0})) == make_rational(1, 8));
        CHECK(value_of(canonicalize(1, 0, {1, 1})) == make_rational(1, 24));
        for (const auto& [k, v] : table) {
            CHECK(dimension_gap(k) == 0); // {1,0,[1,0]} and friends excluded
        }
        CHECK(table.size() == 6); // two at (1,1), four at (1,2)
    }
    SUBCASE("table order and positivity") {
        auto table = engine.compute_table(4, 2, 6);
        for (std::size_t i = 1; i < table.size(); ++i) {
            CHECK(table_less(table[i - 1].first, table[i].first));
        }
        for (const auto& [k, v] : table) {
            CHECK(v > 0);
        }
    }
    SUBCASE("safety bound") {
        CHECK_THROWS_AS(engine.compute_table(16, 1, 1), BoundExceeded);
        engine.set_max_dim_bound(20);
        CHECK_NOTHROW(engine.compute_table(16, 0, 4));
    }
}

TEST_CASE("cache statistics and LRU cap") {
    RecursionEngine engine;
    engine.intersection_number(canonicalize(2, 0, {4}));
    CacheStats stats = engine.cache_stats();
    CHECK(stats.entries > 0);
    CHECK(stats.misses > 0);
    engine.intersection_number(canonicalize(2, 0, {4}));
    CHECK(engine.cache_stats().hits > stats.hits);

    RecursionEngine capped(std::optional<std::size_t>(4));
    Rational v = capped.intersection_number(canonicalize(2, 0, {4}));
    CHECK(capped.cache_stats().entries <= 4);
    CHECK(v == make_rational(1, 1152)); // eviction never changes values

    RecursionEngine zero_cap(std::optional<std::size_t>(0));
    CHECK(zero_cap.intersection_number(canonicalize(1, 2, {0, 0})) == make_rational(1, 8));
    CHECK(zero_cap.cache_stats().entries == 0);
}

TEST_CASE("concurrent queries return the sequential values") {
    RecursionEngine sequential;
    auto keys = enumerate_keys(6, 2, 9);
    std::vector<Rational> expect;
    expect.reserve(keys.size());
    for (const CorrelatorKey& key : keys) {
        expect.push_back(sequential.intersection_number(key));
    }

    RecursionEngine shared;
    std::atomic<bool> ok{true};
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&, t] {
            for (std::size_t i = 0; i < keys.size(); ++i) {
                std::size_t at = (i * 7 + static_cast<std::size_t>(t) * 13) % keys.size();
                if (shared.intersection_number(keys[at]) != expect[at]) {
                    ok = false;
                }
            }
        });
    }
    for (std::thread& w : workers) {
        w.join();
    }
    CHECK(ok.load());
    CacheStats stats = shared.cache_stats();
    CHECK(stats.hits + stats.misses > 0);
}

TEST_CASE("cache persistence round-trip") {
    RecursionEngine engine;
    engine.compute_table(3, 2, 4);
    std::ostringstream saved;
    engine.save_cache(saved);

    std::string text = saved.str();
    CHECK(text.substr(0, std::string(RecursionEngine::kCacheHeader).size()) ==
          RecursionEngine::kCacheHeader);

    RecursionEngine fresh;
    std::istringstream in(text);
    fresh.load_cache(in);
    CHECK(fresh.cache_stats().entries == engine.cache_stats().entries);

    // saving the reloaded cache reproduces the file byte for byte
    std::ostringstream saved2;
    fresh.save_cache(saved2);
    CHECK(saved.str() == saved2.str());

    // loaded values are served from cache and match recomputation
    std::uint64_t hits_before = fresh.cache_stats().hits;
    Rational v = fresh.intersection_number(canonicalize(1, 1, {1, 0}));
    CHECK(v == make_rational(1, 12));
    CHECK(fresh.cache_stats().hits > hits_before);
}

TEST_CASE("cache load rejects malformed input") {
    RecursionEngine engine;
    std::istringstream bad1("wrong header\n");
    CHECK_THROWS_AS(engine.load_cache(bad1), std::runtime_error);
    std::istringstream bad2(std::string(RecursionEngine::kCacheHeader) + "\n1 0 oops\n");
    CHECK_THROWS_AS(engine.load_cache(bad2), std::runtime_error);
}
