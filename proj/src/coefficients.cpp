#include "mgn/coefficients.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "mgn/errors.hpp"

namespace mgn {

namespace {

Integer ipow(unsigned long base, unsigned long exp) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

std::mutex& coeff_mutex() {
    static std::mutex m;
    return m;
}

// Akiyama-Tanigawa transform; yields the B_1 = +1/2 convention, flipped
// below to B_1 = -1/2. Only even indices are consumed downstream.
std::vector<Rational> bernoulli_row(int m) {
    std::vector<Rational> a(m + 1);
    for (int j = 0; j <= m; ++j) {
        a[j] = make_rational(1, j + 1);
    }
    std::vector<Rational> out;
    out.reserve(m + 1);
    out.push_back(a[0]);
    for (int i = 1; i <= m; ++i) {
        for (int j = 0; j + i <= m; ++j) {
            a[j] = Rational(j + 1) * (a[j] - a[j + 1]);
        }
        out.push_back(a[0]);
    }
    if (m >= 1) {
        out[1] = -out[1];
    }
    return out;
}

} // namespace

Integer factorial(int n) {
    if (n < 0) {
        throw InvalidDomain("factorial of negative argument");
    }
    static std::vector<Integer> table{1};
    std::lock_guard<std::mutex> lock(coeff_mutex());
    while (static_cast<int>(table.size()) <= n) {
        table.push_back(table.back() * static_cast<long>(table.size()));
    }
    return table[n];
}

Integer binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Integer falling_factorial(int n, int l) {
    if (l < 0 || l > n) {
        throw InvalidDomain("falling_factorial out of range");
    }
    return factorial(n) / factorial(n - l);
}

Rational bernoulli(int m) {
    if (m < 0) {
        throw InvalidDomain("bernoulli index must be nonnegative");
    }
    static std::vector<Rational> table;
    std::lock_guard<std::mutex> lock(coeff_mutex());
    if (static_cast<int>(table.size()) <= m) {
        table = bernoulli_row(m + 8);
    }
    return table[m];
}

Integer double_factorial(long k) {
    if (k < -1) {
        throw InvalidDomain("double factorial undefined below -1");
    }
    static std::vector<Integer> table{1, 1}; // indices k = -1, 0
    std::lock_guard<std::mutex> lock(coeff_mutex());
    while (static_cast<long>(table.size()) <= k + 1) {
        long next = static_cast<long>(table.size()) - 1;
        table.push_back(table[next - 1] * next);
    }
    return table[k + 1];
}

const Rational& BetaTable::at(int l) {
    if (l < 0) {
        throw InvalidDomain("beta index must be nonnegative");
    }
    while (static_cast<int>(values_.size()) <= l) {
        int i = static_cast<int>(values_.size());
        if (i == 0) {
            values_.push_back(Rational(1));
            continue;
        }
        int sign = (i % 2 == 0) ? -1 : 1; // (-1)^{l-1}
        Integer num = sign * ipow(2, i) * (ipow(2, 2 * i) - 2);
        values_.push_back(Rational(num) * bernoulli(2 * i) / Rational(factorial(2 * i)));
    }
    return values_[l];
}

Rational beta_coeff(int l) {
    static BetaTable table;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    return table.at(l);
}

Rational a_coeff(int n, int k) {
    if (n < 0) {
        throw InvalidDomain("a_coeff requires n >= 0");
    }
    if (k < 0 || k > n) {
        return 0;
    }
    static std::map<std::pair<int, int>, Rational> table;
    static std::mutex m;
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = table.find({n, k});
        if (it != table.end()) {
            return it->second;
        }
    }
    Rational v = Rational(factorial(2 * n - k)) /
                 Rational(ipow(2, n - k) * factorial(k) * factorial(n - k));
    std::lock_guard<std::mutex> lock(m);
    table.emplace(std::make_pair(n, k), v);
    return v;
}

Rational zeta_pi_ratio(int two_m) {
    if (two_m <= 0 || two_m % 2 != 0) {
        throw InvalidDomain("zeta_pi_ratio expects a positive even argument");
    }
    int m = two_m / 2;
    int sign = (m % 2 == 1) ? 1 : -1; // (-1)^{m+1}
    return Rational(sign) * bernoulli(2 * m) * Rational(ipow(2, 2 * m)) /
           Rational(2 * factorial(2 * m));
}

ZetaValue f_kernel_value(int n, int m, int k) {
    if (n < 0 || m < 0 || k < 0) {
        throw InvalidDomain("f_kernel_value expects nonnegative arguments");
    }
    int M = n + m - k;
    if (M < 0) {
        return {Rational(0), std::nullopt};
    }
    Integer dfs = double_factorial(2L * n - 1) * double_factorial(2L * m - 1);
    if (M == 0) {
        return {Rational(dfs), std::nullopt};
    }
    return {Rational(dfs * (ipow(2, 2 * M + 1) - 4)), 2 * M};
}

std::pair<Rational, int> ZetaValue::pi_graded() const {
    if (coeff == 0 || !zeta_arg.has_value()) {
        return {coeff, 0};
    }
    if (*zeta_arg == 0) {
        return {coeff * make_rational(-1, 2), 0};
    }
    return {coeff * zeta_pi_ratio(*zeta_arg), *zeta_arg};
}

double ZetaValue::approx() const {
    auto [q, p] = pi_graded();
    return to_double(q) * std::pow(M_PI, p);
}

bool operator==(const ZetaValue& a, const ZetaValue& b) {
    return a.pi_graded() == b.pi_graded();
}

} // namespace mgn
