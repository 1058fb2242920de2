#include "mgn/recursion.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "mgn/coefficients.hpp"
#include "mgn/errors.hpp"

namespace mgn {

namespace {

bool is_base_case(const CorrelatorKey& key) {
    return (key.g == 0 && key.n() == 3) || (key.g == 1 && key.n() == 1);
}

CorrelatorKey ensure_canonical(const CorrelatorKey& key) {
    if (!key.ks.empty() && key.g >= 0 && key.k0 >= 0 && key.ks.back() >= 0 &&
        std::is_sorted(key.ks.begin(), key.ks.end(), std::greater<int>())) {
        if (!is_stable(key.g, key.n())) {
            throw InstabilityError("unstable correlator key");
        }
        return key;
    }
    return canonicalize(key.g, key.k0, key.ks);
}

std::vector<int> with_extra(std::vector<int> base, std::initializer_list<int> extra) {
    base.insert(base.end(), extra);
    std::sort(base.begin(), base.end(), std::greater<int>());
    return base;
}

std::string multiset_label(const std::vector<int>& values) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << values[i];
    }
    out << '}';
    return out.str();
}

// Distinct sub-multisets of `rest` with the number of labeled point subsets
// realizing each (product of binomials over the value groups).
struct SubMultiset {
    std::vector<int> values;
    Integer multiplicity;
};

std::vector<SubMultiset> sub_multisets(const std::vector<int>& rest) {
    std::vector<std::pair<int, int>> groups; // (value, count), rest is sorted
    for (int v : rest) {
        if (!groups.empty() && groups.back().first == v) {
            ++groups.back().second;
        } else {
            groups.emplace_back(v, 1);
        }
    }
    std::vector<SubMultiset> out;
    SubMultiset cur{{}, 1};
    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
        if (gi == groups.size()) {
            out.push_back(cur);
            return;
        }
        auto [value, count] = groups[gi];
        for (int take = 0; take <= count; ++take) {
            SubMultiset saved = cur;
            cur.values.insert(cur.values.end(), take, value);
            cur.multiplicity *= binomial(count, take);
            rec(gi + 1);
            cur = std::move(saved);
        }
    };
    rec(0);
    return out;
}

std::vector<int> complement_multiset(const std::vector<int>& rest, const std::vector<int>& taken) {
    std::vector<int> out;
    std::size_t ti = 0;
    std::vector<int> sorted_taken = taken;
    std::sort(sorted_taken.begin(), sorted_taken.end(), std::greater<int>());
    for (int v : rest) {
        if (ti < sorted_taken.size() && sorted_taken[ti] == v) {
            ++ti;
        } else {
            out.push_back(v);
        }
    }
    return out;
}

} // namespace

RecursionEngine::RecursionEngine(std::optional<std::size_t> cache_cap)
    : cache_cap_(cache_cap) {}

std::optional<Rational> RecursionEngine::cache_get(const CorrelatorKey& key) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(key);
    if (it == memo_.end()) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    if (cache_cap_) {
        lru_.splice(lru_.begin(), lru_, it->second.lru_pos);
    }
    return it->second.value;
}

void RecursionEngine::cache_put(const CorrelatorKey& key, const Rational& value) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (memo_.count(key)) {
        return; // concurrent duplicate; values are pure, keep the first
    }
    if (cache_cap_) {
        lru_.push_front(key);
        memo_.emplace(key, Entry{value, lru_.begin()});
        if (memo_.size() > *cache_cap_) {
            memo_.erase(lru_.back());
            lru_.pop_back();
        }
    } else {
        memo_.emplace(key, Entry{value, lru_.end()});
    }
}

Rational RecursionEngine::intersection_number(const CorrelatorKey& raw) {
    CorrelatorKey key = ensure_canonical(raw);
    if (dimension_gap(key) != 0) {
        return 0;
    }
    if (key.g == 0 && key.n() == 3) {
        return 1; // <tau_0^3>_0, the only gap-0 key at (0,3)
    }
    if (key.g == 1 && key.n() == 1) {
        return make_rational(1, 24); // <tau_1>_1 and <kappa1 tau_0>_1
    }
    if (auto cached = cache_get(key)) {
        return *cached;
    }
    Rational value = evaluate(key);
    cache_put(key, value);
    return value;
}

Rational RecursionEngine::evaluate(const CorrelatorKey& key) {
    Rational total = sum_boundary_terms(key, 0, nullptr);
    return total / Rational(double_factorial(2L * key.ks[0] + 1));
}

Rational RecursionEngine::intersection_number_first_slot(const CorrelatorKey& raw,
                                                         int first_exponent) {
    CorrelatorKey key = ensure_canonical(raw);
    auto it = std::find(key.ks.begin(), key.ks.end(), first_exponent);
    if (it == key.ks.end()) {
        throw InvalidDomain("first_exponent does not occur in the key");
    }
    if (dimension_gap(key) != 0) {
        return 0;
    }
    if (is_base_case(key)) {
        return intersection_number(key);
    }
    int index = static_cast<int>(it - key.ks.begin());
    Rational total = sum_boundary_terms(key, index, nullptr);
    return total / Rational(double_factorial(2L * first_exponent + 1));
}

TermBreakdown RecursionEngine::recursion_terms(const CorrelatorKey& raw) {
    CorrelatorKey key = ensure_canonical(raw);
    if (is_base_case(key) && dimension_gap(key) == 0) {
        throw BaseCaseError("recursion_terms on base case " + print_correlator(key));
    }
    TermBreakdown breakdown;
    breakdown.lhs_factor = double_factorial(2L * key.ks[0] + 1);
    sum_boundary_terms(key, 0, &breakdown);
    return breakdown;
}

Rational RecursionEngine::sum_boundary_terms(const CorrelatorKey& key, int first_index,
                                             TermBreakdown* breakdown) {
    const int g = key.g;
    const int k0 = key.k0;
    const int n = key.n();
    const int k1 = key.ks[first_index];
    std::vector<int> rest = key.ks;
    rest.erase(rest.begin() + first_index);

    Rational total = 0;
    auto emit = [&](const std::string& label, const Rational& value) {
        total += value;
        if (breakdown && value != 0) {
            breakdown->boundary_terms.emplace_back(label, value);
        }
    };

    // (a) point-merging: fold point j into the distinguished point
    if (is_stable(g, n - 1)) {
        for (std::size_t jpos = 0; jpos < rest.size(); ++jpos) {
            int kj = rest[jpos];
            for (int l = 0; l <= k0; ++l) {
                int merged = k1 + kj + l - 1;
                if (merged < 0) {
                    continue;
                }
                std::vector<int> sub = rest;
                sub.erase(sub.begin() + jpos);
                sub = with_extra(std::move(sub), {merged});
                Rational weight = Rational(falling_factorial(k0, l)) *
                                  make_rational(double_factorial(2L * (l + k1 + kj) - 1),
                                                double_factorial(2L * kj - 1)) *
                                  beta_coeff(l);
                Rational value =
                    weight * intersection_number(CorrelatorKey{g, k0 - l, std::move(sub)});
                if (value != 0) {
                    std::ostringstream label;
                    label << "merge j=" << (jpos + 2) << ", l=" << l;
                    emit(label.str(), value);
                }
            }
        }
    }

    // (b) non-separating: genus drop, two new points d1 + d2 = l + k1 - 2
    if (g >= 1 && is_stable(g - 1, n + 1)) {
        for (int l = 0; l <= k0; ++l) {
            int dsum = l + k1 - 2;
            for (int d1 = 0; d1 <= dsum; ++d1) {
                int d2 = dsum - d1;
                std::vector<int> sub = with_extra(rest, {d1, d2});
                Rational weight = make_rational(1, 2) * Rational(falling_factorial(k0, l)) *
                                  Rational(double_factorial(2L * d1 + 1) *
                                           double_factorial(2L * d2 + 1)) *
                                  beta_coeff(l);
                Rational value =
                    weight * intersection_number(CorrelatorKey{g - 1, k0 - l, std::move(sub)});
                if (value != 0) {
                    std::ostringstream label;
                    label << "nonsep d=(" << d1 << "," << d2 << "), l=" << l;
                    emit(label.str(), value);
                }
            }
        }
    }

    // (c) separating: ordered (g1, I) with I + J = remaining points; m0 is
    // pinned by the g1-side dimension and the term drops unless
    // m0, n0 >= 0 with m0 + n0 = k0 - l.
    for (const SubMultiset& part : sub_multisets(rest)) {
        const std::vector<int>& iset = part.values;
        std::vector<int> jset = complement_multiset(rest, iset);
        int sum_i = 0;
        for (int v : iset) {
            sum_i += v;
        }
        int ni = static_cast<int>(iset.size()) + 1;
        int nj = static_cast<int>(jset.size()) + 1;
        for (int g1 = 0; g1 <= g; ++g1) {
            int g2 = g - g1;
            if (!is_stable(g1, ni) || !is_stable(g2, nj)) {
                continue;
            }
            for (int l = 0; l <= k0; ++l) {
                int dsum = l + k1 - 2;
                for (int d1 = 0; d1 <= dsum; ++d1) {
                    int d2 = dsum - d1;
                    int m0 = dimension(g1, ni) - d1 - sum_i;
                    int n0 = k0 - l - m0;
                    if (m0 < 0 || n0 < 0) {
                        continue;
                    }
                    Rational left = intersection_number(
                        CorrelatorKey{g1, m0, with_extra(iset, {d1})});
                    if (left == 0) {
                        continue;
                    }
                    Rational right = intersection_number(
                        CorrelatorKey{g2, n0, with_extra(jset, {d2})});
                    if (right == 0) {
                        continue;
                    }
                    Rational weight = make_rational(1, 2) * Rational(part.multiplicity) *
                                      make_rational(factorial(k0),
                                                    factorial(m0) * factorial(n0)) *
                                      Rational(double_factorial(2L * d1 + 1) *
                                               double_factorial(2L * d2 + 1)) *
                                      beta_coeff(l);
                    std::ostringstream label;
                    label << "sep g1=" << g1 << " I=" << multiset_label(iset) << ", d=(" << d1
                          << "," << d2 << "), l=" << l;
                    emit(label.str(), weight * left * right);
                }
            }
        }
    }
    return total;
}

std::vector<CorrelatorKey> enumerate_keys(int max_dim, int g_max, int n_max) {
    std::vector<CorrelatorKey> keys;
    // descending partitions of d - k0 into exactly n parts (zeros allowed),
    // emitted in ascending lexicographic order
    for (int g = 0; g <= g_max; ++g) {
        for (int n = 1; n <= n_max; ++n) {
            if (!is_stable(g, n)) {
                continue;
            }
            int d = dimension(g, n);
            if (d < 0 || d > max_dim) {
                continue;
            }
            for (int k0 = 0; k0 <= d; ++k0) {
                std::vector<int> parts;
                std::function<void(int, int, int)> gen = [&](int remaining, int slots, int cap) {
                    if (slots == 0) {
                        if (remaining == 0) {
                            keys.push_back(CorrelatorKey{g, k0, parts});
                        }
                        return;
                    }
                    int low = (remaining + slots - 1) / slots; // smallest feasible lead
                    for (int first = low; first <= std::min(remaining, cap); ++first) {
                        parts.push_back(first);
                        gen(remaining - first, slots - 1, first);
                        parts.pop_back();
                    }
                };
                gen(d - k0, n, d - k0);
            }
        }
    }
    return keys;
}

std::vector<std::pair<CorrelatorKey, Rational>>
RecursionEngine::compute_table(int max_dim, int g_max, int n_max) {
    if (max_dim < 0 || g_max < 0 || n_max < 1) {
        throw InvalidDomain("compute_table bounds must be nonnegative (n_max >= 1)");
    }
    if (max_dim > max_dim_bound_) {
        std::ostringstream msg;
        msg << "max_dim " << max_dim << " exceeds safety bound " << max_dim_bound_;
        throw BoundExceeded(msg.str());
    }
    std::vector<std::pair<CorrelatorKey, Rational>> out;
    for (const CorrelatorKey& key : enumerate_keys(max_dim, g_max, n_max)) {
        out.emplace_back(key, intersection_number(key));
    }
    return out;
}

CacheStats RecursionEngine::cache_stats() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return CacheStats{hits_, misses_, memo_.size()};
}

void RecursionEngine::clear_cache() {
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.clear();
    lru_.clear();
    hits_ = misses_ = 0;
}

void RecursionEngine::save_cache(std::ostream& out) const {
    std::vector<std::pair<CorrelatorKey, Rational>> entries;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        entries.reserve(memo_.size());
        for (const auto& [key, entry] : memo_) {
            entries.emplace_back(key, entry.value);
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return table_less(a.first, b.first); });
    out << kCacheHeader << '\n';
    for (const auto& [key, value] : entries) {
        out << key.g << ' ' << key.k0 << ' ';
        for (int i = 0; i < key.n(); ++i) {
            if (i) out << ',';
            out << key.ks[i];
        }
        out << ' ' << to_fraction_string(value) << '\n';
    }
}

void RecursionEngine::load_cache(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCacheHeader) {
        throw std::runtime_error("cache file: missing or unsupported header");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        int g = 0, k0 = 0;
        std::string ks_csv, value_str;
        if (!(fields >> g >> k0 >> ks_csv >> value_str)) {
            throw std::runtime_error("cache file: malformed record at line " +
                                     std::to_string(lineno));
        }
        std::vector<int> ks;
        std::istringstream ks_in(ks_csv);
        std::string tok;
        while (std::getline(ks_in, tok, ',')) {
            ks.push_back(std::stoi(tok));
        }
        CorrelatorKey key = canonicalize(g, k0, std::move(ks));
        cache_put(key, rational_from_string(value_str));
    }
}

void RecursionEngine::save_cache_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write cache file " + path);
    }
    save_cache(out);
}

void RecursionEngine::load_cache_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read cache file " + path);
    }
    load_cache(in);
}

} // namespace mgn
