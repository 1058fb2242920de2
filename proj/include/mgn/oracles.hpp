#ifndef MGN_ORACLES_HPP
#define MGN_ORACLES_HPP

#include <mutex>
#include <unordered_map>
#include <vector>

#include "mgn/correlator.hpp"
#include "mgn/rational.hpp"

namespace mgn {

// <tau_{k1}...tau_{kn}>_0 = (n-3)! / prod k_i! when sum k_i = n-3, else 0.
// Requires |ks| >= 3.
Rational genus0_closed_form(const std::vector<int>& ks);

// Independently coded pure-psi recursion (k0 = 0 throughout). Shares only
// the coefficient lookups with the main engine.
class DvvEngine {
public:
    Rational intersection(int g, std::vector<int> ks);

private:
    struct VecKeyHash {
        std::size_t operator()(const std::pair<int, std::vector<int>>& k) const;
    };

    Rational evaluate(int g, const std::vector<int>& ks);

    std::mutex mutex_;
    std::unordered_map<std::pair<int, std::vector<int>>, Rational, VecKeyHash> memo_;
};

// Convenience front end over a shared engine.
Rational dvv_intersection(int g, const std::vector<int>& ks);

// One summand of a kappa-to-psi reduction: coeff * <pure-psi key>.
struct ReductionTerm {
    Integer coeff;
    CorrelatorKey key; // k0 == 0
};

enum class KappaElimination { LargestFirst, SmallestFirst };

// Push-forward elimination of kappa factors: a kappa_a becomes a new point
// carrying psi^{a+1}, with every remaining kappa_b corrected to
// (kappa_b - psi_new^b), expanded over subsets with alternating sign.
// Output is merged by key and sorted; the evaluated sum is independent of
// the elimination order.
std::vector<ReductionTerm> kappa_reduce(const KappaPsiKey& key,
                                        KappaElimination order = KappaElimination::LargestFirst);

// Sum over reduction terms of coeff * dvv_intersection.
Rational oracle_intersection(const CorrelatorKey& key);

// <tau_0 prod tau_{k_i}>_{g,n+1} = sum_j <tau_{k_j - 1} prod_{i != j}>_{g,n}
bool string_check(int g, const std::vector<int>& ks);

// <tau_1 prod tau_{k_i}>_{g,n+1} = (2g - 2 + n) <prod tau_{k_i}>_{g,n}
bool dilaton_check(int g, const std::vector<int>& ks);

} // namespace mgn

#endif
