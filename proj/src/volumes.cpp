#include "mgn/volumes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "mgn/coefficients.hpp"
#include "mgn/errors.hpp"

namespace mgn {

bool PiGradedPoly::TermOrder::operator()(const TermKey& a, const TermKey& b) const {
    int da = std::accumulate(a.expo.begin(), a.expo.end(), 0);
    int db = std::accumulate(b.expo.begin(), b.expo.end(), 0);
    if (da != db) return da < db;
    if (a.expo != b.expo) return a.expo > b.expo; // L1-major within a degree
    return a.pi_pow < b.pi_pow;
}

void PiGradedPoly::add_term(std::vector<int> expo, int pi_pow, const Rational& coeff) {
    if (static_cast<int>(expo.size()) != n_) {
        throw InvalidDomain("exponent vector length must equal the number of points");
    }
    if (coeff == 0) {
        return;
    }
    terms_[TermKey{std::move(expo), pi_pow}] += coeff;
}

Rational PiGradedPoly::coefficient(const std::vector<int>& expo, int pi_pow) const {
    auto it = terms_.find(TermKey{expo, pi_pow});
    return it == terms_.end() ? Rational(0) : it->second;
}

std::string PiGradedPoly::pretty() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [key, coeff] : terms_) {
        if (!first) {
            out << " + ";
        }
        first = false;
        out << to_minimal_string(coeff);
        if (key.pi_pow > 0) {
            out << "*pi^" << key.pi_pow;
        }
        for (int i = 0; i < n_; ++i) {
            if (key.expo[i] > 0) {
                out << "*L" << (i + 1) << "^" << 2 * key.expo[i];
            }
        }
    }
    return out.str();
}

double PiGradedPoly::evaluate(const std::vector<double>& lengths) const {
    if (static_cast<int>(lengths.size()) != n_) {
        throw InvalidDomain("length vector size mismatch");
    }
    double total = 0;
    for (const auto& [key, coeff] : terms_) {
        double term = to_double(coeff) * std::pow(M_PI, key.pi_pow);
        for (int i = 0; i < n_; ++i) {
            term *= std::pow(lengths[i] * lengths[i], key.expo[i]);
        }
        total += term;
    }
    return total;
}

namespace {

// descending partitions of `total` into exactly `slots` parts (zeros allowed)
void for_each_partition(int total, int slots, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> parts;
    std::function<void(int, int, int)> gen = [&](int remaining, int left, int cap) {
        if (left == 0) {
            if (remaining == 0) {
                fn(parts);
            }
            return;
        }
        int low = (remaining + left - 1) / left;
        for (int first = low; first <= std::min(remaining, cap); ++first) {
            parts.push_back(first);
            gen(remaining - first, left - 1, first);
            parts.pop_back();
        }
    };
    gen(total, slots, total);
}

Integer ipow_int(long base, int exp) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

} // namespace

PiGradedPoly volume_polynomial(RecursionEngine& engine, int g, int n) {
    if (n < 1) {
        throw EmptyKeyError("volume polynomial needs n >= 1");
    }
    if (!is_stable(g, n)) {
        throw InstabilityError("unstable (g, n)");
    }
    const int d = dimension(g, n);
    PiGradedPoly poly(n);
    for (int k0 = 0; k0 <= d; ++k0) {
        for_each_partition(d - k0, n, [&](const std::vector<int>& ks) {
            Rational value = engine.intersection_number(CorrelatorKey{g, k0, ks});
            if (value == 0) {
                return;
            }
            Integer denom = factorial(k0);
            for (int k : ks) {
                denom *= ipow_int(2, k) * factorial(k);
            }
            Rational coeff = make_rational(ipow_int(2, k0), denom) * value;
            // distribute over the distinct orderings of the exponent multiset
            std::vector<int> perm(ks.rbegin(), ks.rend()); // ascending start
            do {
                poly.add_term(perm, 2 * k0, coeff);
            } while (std::next_permutation(perm.begin(), perm.end()));
        });
    }
    return poly;
}

double volume_at(RecursionEngine& engine, int g, int n, const std::vector<double>& lengths) {
    if (static_cast<int>(lengths.size()) != n) {
        throw InvalidDomain("expected " + std::to_string(n) + " boundary lengths");
    }
    return volume_polynomial(engine, g, n).evaluate(lengths);
}

std::vector<GfCoeff> generating_function_coeffs(RecursionEngine& engine, int g_max, int dim_max) {
    if (g_max < 0 || dim_max < 0) {
        throw InvalidDomain("bounds must be nonnegative");
    }
    if (dim_max > engine.max_dim_bound()) {
        throw BoundExceeded("dim_max exceeds the engine safety bound");
    }
    std::vector<GfCoeff> out;
    for (const CorrelatorKey& key : enumerate_keys(dim_max, g_max, dim_max + 3)) {
        Rational value = engine.intersection_number(key);
        if (value == 0) {
            continue;
        }
        Integer denom = factorial(key.k0);
        std::vector<std::pair<int, int>> degrees; // (a, multiplicity), ks descending
        for (int i = key.n() - 1; i >= 0;) {
            int j = i;
            while (j >= 0 && key.ks[j] == key.ks[i]) {
                --j;
            }
            degrees.emplace_back(key.ks[i], i - j);
            denom *= factorial(i - j);
            i = j;
        }
        out.push_back(GfCoeff{key.g, key.k0, std::move(degrees),
                              make_rational(Integer(1), denom) * value});
    }
    return out;
}

} // namespace mgn
