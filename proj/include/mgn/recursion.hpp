#ifndef MGN_RECURSION_HPP
#define MGN_RECURSION_HPP

#include <cstdint>
#include <iosfwd>
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mgn/correlator.hpp"
#include "mgn/rational.hpp"

namespace mgn {

// Diagnostic decomposition of one recursion step. The terms sum to
// lhs_factor * intersection_number(key).
struct TermBreakdown {
    Integer lhs_factor; // (2 k1 + 1)!!
    std::vector<std::pair<std::string, Rational>> boundary_terms;
};

struct CacheStats {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::size_t entries = 0;
};

// Memoized exact evaluation of <kappa1^{k0} tau_{k1}...tau_{kn}>_g.
//
// The distinguished point of the recursion is bound to a psi-exponent of
// maximal value; any choice is valid (see intersection_number_first_slot)
// and maximal is taken for determinism.
class RecursionEngine {
public:
    explicit RecursionEngine(std::optional<std::size_t> cache_cap = std::nullopt);

    Rational intersection_number(const CorrelatorKey& key);

    // Evaluates the top-level step with the distinguished slot bound to a
    // point of the given exponent (must occur in key.ks). Sub-calls use the
    // default binding. Test hook for first-slot independence.
    Rational intersection_number_first_slot(const CorrelatorKey& key, int first_exponent);

    // Every nonzero summand of the recursion with a human-readable label.
    // Throws BaseCaseError on base keys.
    TermBreakdown recursion_terms(const CorrelatorKey& key);

    // All canonical keys with 3g-3+n <= max_dim, g <= g_max, n <= n_max and
    // dimension gap 0, in table order, with exact values.
    std::vector<std::pair<CorrelatorKey, Rational>>
    compute_table(int max_dim, int g_max, int n_max);

    int max_dim_bound() const { return max_dim_bound_; }
    void set_max_dim_bound(int bound) { max_dim_bound_ = bound; }

    CacheStats cache_stats() const;
    void clear_cache();

    // Newline-delimited "g k0 ks-csv num/den" records under a version header.
    void save_cache(std::ostream& out) const;
    void load_cache(std::istream& in);
    void save_cache_file(const std::string& path) const;
    void load_cache_file(const std::string& path);

    static constexpr const char* kCacheHeader = "# mgn-cache v1";

private:
    struct Entry {
        Rational value;
        std::list<CorrelatorKey>::iterator lru_pos;
    };

    Rational evaluate(const CorrelatorKey& key);
    Rational sum_boundary_terms(const CorrelatorKey& key, int first_index,
                                TermBreakdown* breakdown);
    std::optional<Rational> cache_get(const CorrelatorKey& key);
    void cache_put(const CorrelatorKey& key, const Rational& value);

    int max_dim_bound_ = 15;
    std::optional<std::size_t> cache_cap_;

    mutable std::mutex mutex_;
    std::unordered_map<CorrelatorKey, Entry, KeyHash> memo_;
    std::list<CorrelatorKey> lru_;
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
};

// Key enumeration used by compute_table and the CLI; exposed for tests.
std::vector<CorrelatorKey> enumerate_keys(int max_dim, int g_max, int n_max);

} // namespace mgn

#endif
