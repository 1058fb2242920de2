#ifndef MGN_COEFFICIENTS_HPP
#define MGN_COEFFICIENTS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "mgn/rational.hpp"

namespace mgn {

// Exact value r * zeta(2m). zeta_arg absent means a pure rational;
// zeta_arg == 0 means zeta(0) = -1/2.
struct ZetaValue {
    Rational coeff;
    std::optional<int> zeta_arg;

    bool is_zero() const { return coeff == 0; }

    // Exact reduction via zeta(2m) = (-1)^{m+1} B_{2m} (2pi)^{2m} / (2 (2m)!):
    // returns (q, p) with value = q * pi^p.
    std::pair<Rational, int> pi_graded() const;

    double approx() const;
};

bool operator==(const ZetaValue& a, const ZetaValue& b);

// Growable memo of beta_l values. Two tables compare equal iff they hold
// the same prefix of the sequence.
class BetaTable {
public:
    const Rational& at(int l);
    std::size_t size() const { return values_.size(); }
    bool operator==(const BetaTable& other) const { return values_ == other.values_; }

private:
    std::vector<Rational> values_;
};

Integer factorial(int n);
Integer binomial(int n, int k);

// Falling factorial n! / (n-l)!.
Integer falling_factorial(int n, int l);

// B_m with the B_1 = -1/2 convention; memoized.
Rational bernoulli(int m);

// k!! with (-1)!! = 0!! = 1; rejects k < -1.
Integer double_factorial(long k);

// beta_l = (-1)^{l-1} 2^l (2^{2l} - 2) B_{2l} / (2l)!; beta_0 = 1.
Rational beta_coeff(int l);

// A_k^{(n)} = (2n-k)! / (2^{n-k} k! (n-k)!), zero outside 0 <= k <= n.
Rational a_coeff(int n, int k);

// zeta(2m) / pi^{2m} as an exact rational, m >= 1.
Rational zeta_pi_ratio(int two_m);

// P_x^n P_y^m h^{(2k)}(x+y) at x = y = 0, h(x) = 2/(1 + e^{x/2}):
//   (2n-1)!!(2m-1)!!(2^{2(n+m-k)+1} - 4) zeta(2(n+m-k))   for k < n+m,
//   (2n-1)!!(2m-1)!!                                      for k = n+m,
//   0                                                     for k > n+m.
ZetaValue f_kernel_value(int n, int m, int k);

} // namespace mgn

#endif
