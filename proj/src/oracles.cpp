#include "mgn/oracles.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mgn/coefficients.hpp"
#include "mgn/errors.hpp"

namespace mgn {

Rational genus0_closed_form(const std::vector<int>& ks) {
    int n = static_cast<int>(ks.size());
    if (n < 3) {
        throw InvalidDomain("genus-0 closed form needs at least 3 points");
    }
    int total = std::accumulate(ks.begin(), ks.end(), 0);
    if (total != n - 3) {
        return 0;
    }
    Integer denom = 1;
    for (int k : ks) {
        denom *= factorial(k);
    }
    return make_rational(factorial(n - 3), denom);
}

std::size_t DvvEngine::VecKeyHash::operator()(const std::pair<int, std::vector<int>>& k) const {
    std::size_t h = std::hash<int>{}(k.first);
    for (int e : k.second) {
        h = h * 1000003u + static_cast<std::size_t>(e + 1);
    }
    return h;
}

Rational DvvEngine::intersection(int g, std::vector<int> ks) {
    if (ks.empty()) {
        throw EmptyKeyError("dvv_intersection needs at least one point");
    }
    for (int e : ks) {
        if (e < 0) {
            throw InvalidDomain("psi-exponents must be nonnegative");
        }
    }
    if (!is_stable(g, static_cast<int>(ks.size()))) {
        throw InstabilityError("unstable (g, n) in dvv_intersection");
    }
    std::sort(ks.begin(), ks.end()); // ascending; distinguished point is the back
    return evaluate(g, ks);
}

Rational DvvEngine::evaluate(int g, const std::vector<int>& ks) {
    const int n = static_cast<int>(ks.size());
    if (std::accumulate(ks.begin(), ks.end(), 0) != dimension(g, n)) {
        return 0;
    }
    if (g == 0 && n == 3) {
        return 1;
    }
    if (g == 1 && n == 1) {
        return make_rational(1, 24);
    }
    auto memo_key = std::make_pair(g, ks);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find(memo_key);
        if (it != memo_.end()) {
            return it->second;
        }
    }

    const int k1 = ks.back();
    std::vector<int> rest(ks.begin(), ks.end() - 1);
    const int m = static_cast<int>(rest.size());
    Rational acc = 0;

    for (int j = 0; j < m; ++j) {
        int merged = k1 + rest[j] - 1;
        if (merged < 0 || !is_stable(g, n - 1)) {
            continue;
        }
        std::vector<int> sub = rest;
        sub[j] = merged;
        std::sort(sub.begin(), sub.end());
        acc += make_rational(double_factorial(2L * (k1 + rest[j]) - 1),
                             double_factorial(2L * rest[j] - 1)) *
               evaluate(g, sub);
    }

    if (g >= 1 && is_stable(g - 1, n + 1)) {
        for (int d1 = 0; d1 <= k1 - 2; ++d1) {
            int d2 = k1 - 2 - d1;
            std::vector<int> sub = rest;
            sub.push_back(d1);
            sub.push_back(d2);
            std::sort(sub.begin(), sub.end());
            acc += make_rational(double_factorial(2L * d1 + 1) * double_factorial(2L * d2 + 1),
                                 2) *
                   evaluate(g - 1, sub);
        }
    }

    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> iset, jset;
        for (int i = 0; i < m; ++i) {
            ((mask >> i) & 1u ? iset : jset).push_back(rest[i]);
        }
        for (int g1 = 0; g1 <= g; ++g1) {
            int g2 = g - g1;
            if (!is_stable(g1, static_cast<int>(iset.size()) + 1) ||
                !is_stable(g2, static_cast<int>(jset.size()) + 1)) {
                continue;
            }
            for (int d1 = 0; d1 <= k1 - 2; ++d1) {
                int d2 = k1 - 2 - d1;
                std::vector<int> left = iset;
                left.push_back(d1);
                std::sort(left.begin(), left.end());
                Rational lv = evaluate(g1, left);
                if (lv == 0) {
                    continue;
                }
                std::vector<int> right = jset;
                right.push_back(d2);
                std::sort(right.begin(), right.end());
                acc += make_rational(double_factorial(2L * d1 + 1) *
                                         double_factorial(2L * d2 + 1),
                                     2) *
                       lv * evaluate(g2, right);
            }
        }
    }

    Rational value = acc / Rational(double_factorial(2L * k1 + 1));
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(std::move(memo_key), value);
    return value;
}

Rational dvv_intersection(int g, const std::vector<int>& ks) {
    static DvvEngine engine;
    return engine.intersection(g, ks);
}

std::vector<ReductionTerm> kappa_reduce(const KappaPsiKey& key, KappaElimination order) {
    KappaPsiKey canon = make_kappa_psi(key.g, key.kappas, key.ks);
    std::map<std::vector<int>, Integer> acc; // descending pure-psi multiset -> coeff

    struct Frame {
        std::vector<int> kappas;
        std::vector<int> ks;
        Integer sign;
    };
    std::vector<Frame> stack{{canon.kappas, canon.ks, Integer(1)}};
    while (!stack.empty()) {
        Frame frame = std::move(stack.back());
        stack.pop_back();
        if (frame.kappas.empty()) {
            std::sort(frame.ks.begin(), frame.ks.end(), std::greater<int>());
            acc[frame.ks] += frame.sign;
            continue;
        }
        std::size_t pick = (order == KappaElimination::LargestFirst)
                               ? 0
                               : frame.kappas.size() - 1; // kappas sorted descending
        int a = frame.kappas[pick];
        std::vector<int> remaining = frame.kappas;
        remaining.erase(remaining.begin() + pick);
        int r = static_cast<int>(remaining.size());
        for (unsigned mask = 0; mask < (1u << r); ++mask) {
            std::vector<int> kept;
            int subset_sum = 0;
            int subset_size = 0;
            for (int i = 0; i < r; ++i) {
                if ((mask >> i) & 1u) {
                    subset_sum += remaining[i];
                    ++subset_size;
                } else {
                    kept.push_back(remaining[i]);
                }
            }
            std::vector<int> ks = frame.ks;
            ks.push_back(a + 1 + subset_sum);
            stack.push_back(Frame{std::move(kept), std::move(ks),
                                  (subset_size % 2 == 0) ? frame.sign : -frame.sign});
        }
    }

    std::vector<ReductionTerm> out;
    for (const auto& [ks, coeff] : acc) {
        if (coeff != 0) {
            out.push_back(ReductionTerm{coeff, canonicalize(canon.g, 0, ks)});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const ReductionTerm& a, const ReductionTerm& b) {
                  return table_less(a.key, b.key);
              });
    return out;
}

Rational oracle_intersection(const CorrelatorKey& key) {
    Rational total = 0;
    for (const ReductionTerm& term : kappa_reduce(to_kappa_psi(key))) {
        total += Rational(term.coeff) * dvv_intersection(term.key.g, term.key.ks);
    }
    return total;
}

bool string_check(int g, const std::vector<int>& ks) {
    if (!is_stable(g, static_cast<int>(ks.size()))) {
        throw InstabilityError("string_check needs a stable base key");
    }
    std::vector<int> lhs = ks;
    lhs.push_back(0);
    Rational left = dvv_intersection(g, lhs);
    Rational right = 0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        if (ks[j] < 1) {
            continue;
        }
        std::vector<int> sub = ks;
        sub[j] -= 1;
        right += dvv_intersection(g, sub);
    }
    return left == right;
}

bool dilaton_check(int g, const std::vector<int>& ks) {
    if (!is_stable(g, static_cast<int>(ks.size()))) {
        throw InstabilityError("dilaton_check needs a stable base key");
    }
    std::vector<int> lhs = ks;
    lhs.push_back(1);
    Rational left = dvv_intersection(g, lhs);
    Rational right = Rational(2 * g - 2 + static_cast<int>(ks.size())) *
                     dvv_intersection(g, ks);
    return left == right;
}

} // namespace mgn
