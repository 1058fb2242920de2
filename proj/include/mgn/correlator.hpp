#ifndef MGN_CORRELATOR_HPP
#define MGN_CORRELATOR_HPP

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mgn {

bool is_stable(int g, int n);

// dim M_{g,n} = 3g - 3 + n
int dimension(int g, int n);

// Canonical identity of <kappa1^{k0} tau_{k1} ... tau_{kn}>_g.
// ks is kept sorted descending; keys are equal iff componentwise equal.
struct CorrelatorKey {
    int g = 0;
    int k0 = 0;
    std::vector<int> ks;

    int n() const { return static_cast<int>(ks.size()); }
    bool operator==(const CorrelatorKey&) const = default;
};

// Table order: lexicographic in (g, n, k0, ks).
bool table_less(const CorrelatorKey& a, const CorrelatorKey& b);

struct KeyHash {
    std::size_t operator()(const CorrelatorKey& k) const;
};

// Sorts ks, validates stability and |ks| >= 1.
CorrelatorKey canonicalize(int g, int k0, std::vector<int> ks);

// (3g - 3 + n) - (k0 + sum ks); the correlator vanishes unless this is 0.
int dimension_gap(const CorrelatorKey& key);

// Oracle-side generalization carrying arbitrary kappa_a indices (a >= 1).
// kappa factors do not count toward marked points for stability.
struct KappaPsiKey {
    int g = 0;
    std::vector<int> kappas; // sorted descending, each >= 1
    std::vector<int> ks;     // sorted descending

    bool operator==(const KappaPsiKey&) const = default;
};

KappaPsiKey make_kappa_psi(int g, std::vector<int> kappas, std::vector<int> ks);
KappaPsiKey to_kappa_psi(const CorrelatorKey& key);

// Requires every kappa index to be 1.
CorrelatorKey to_correlator(const KappaPsiKey& key);

// Canonical text form, e.g. "<kappa1^2 tau0 tau1^2>_g=1".
std::string print_correlator(const CorrelatorKey& key);

// Grammar: '<' factor (SP factor)* '>' '_' ['g='] INT
// with factor ::= kappa1['^'INT] | tau INT ['^'INT].
// Exponents default to 1 and expand as multiplicities.
CorrelatorKey parse_correlator(std::string_view text);

} // namespace mgn

#endif
