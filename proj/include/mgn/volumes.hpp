#ifndef MGN_VOLUMES_HPP
#define MGN_VOLUMES_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mgn/rational.hpp"
#include "mgn/recursion.hpp"

namespace mgn {

// Polynomial in L_1^2, ..., L_n^2 with coefficients (rational) * pi^{2j}.
// A term is keyed by the vector (k_1...k_n) of L^2-exponents and the pi
// power 2j; for V_{g,n} every term satisfies j + sum k_i = 3g - 3 + n.
class PiGradedPoly {
public:
    struct TermKey {
        std::vector<int> expo;
        int pi_pow = 0;
        bool operator==(const TermKey&) const = default;
    };
    // Total L-degree ascending, then L1-major, so constants print first.
    struct TermOrder {
        bool operator()(const TermKey& a, const TermKey& b) const;
    };
    using TermMap = std::map<TermKey, Rational, TermOrder>;

    explicit PiGradedPoly(int n) : n_(n) {}

    int num_points() const { return n_; }
    const TermMap& terms() const { return terms_; }

    void add_term(std::vector<int> expo, int pi_pow, const Rational& coeff);
    // Zero if absent.
    Rational coefficient(const std::vector<int>& expo, int pi_pow) const;

    // e.g. "1/12*pi^2 + 1/48*L1^2"
    std::string pretty() const;

    // Numeric value at lengths L (|L| = n), with floating-point pi.
    double evaluate(const std::vector<double>& lengths) const;

private:
    int n_;
    TermMap terms_;
};

// V_{g,n}(L) assembled from correlators:
//   sum_{k0 + sum k_i = 3g-3+n} (2 pi^2)^{k0} / (k0! prod 2^{k_i} k_i!)
//     * <kappa1^{k0} prod tau_{k_i}>_g * prod L_i^{2 k_i},
// symmetrized over the labeled points.
PiGradedPoly volume_polynomial(RecursionEngine& engine, int g, int n);

double volume_at(RecursionEngine& engine, int g, int n, const std::vector<double>& lengths);

// Coefficient of s^{s_power} prod t_a^{m_a} in G(s, t_0, t_1, ...).
struct GfCoeff {
    int g = 0;
    int s_power = 0;
    std::vector<std::pair<int, int>> t_degrees; // (a, m_a), a ascending
    Rational coeff;
};

std::vector<GfCoeff> generating_function_coeffs(RecursionEngine& engine, int g_max, int dim_max);

} // namespace mgn

#endif
