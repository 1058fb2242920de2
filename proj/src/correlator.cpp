#include "mgn/correlator.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "mgn/errors.hpp"

namespace mgn {

bool is_stable(int g, int n) {
    return g >= 0 && n >= 0 && 2 * g - 2 + n > 0;
}

int dimension(int g, int n) {
    return 3 * g - 3 + n;
}

bool table_less(const CorrelatorKey& a, const CorrelatorKey& b) {
    if (a.g != b.g) return a.g < b.g;
    if (a.n() != b.n()) return a.n() < b.n();
    if (a.k0 != b.k0) return a.k0 < b.k0;
    return a.ks < b.ks;
}

std::size_t KeyHash::operator()(const CorrelatorKey& k) const {
    std::size_t h = std::hash<int>{}(k.g) * 0x9e3779b97f4a7c15ULL;
    h ^= std::hash<int>{}(k.k0) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    for (int e : k.ks) {
        h ^= std::hash<int>{}(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

CorrelatorKey canonicalize(int g, int k0, std::vector<int> ks) {
    if (g < 0 || k0 < 0) {
        throw InvalidDomain("genus and kappa1-power must be nonnegative");
    }
    if (ks.empty()) {
        throw EmptyKeyError("correlator needs at least one marked point");
    }
    for (int e : ks) {
        if (e < 0) {
            throw InvalidDomain("psi-exponents must be nonnegative");
        }
    }
    int n = static_cast<int>(ks.size());
    if (!is_stable(g, n)) {
        std::ostringstream msg;
        msg << "unstable (g, n) = (" << g << ", " << n << ")";
        throw InstabilityError(msg.str());
    }
    std::sort(ks.begin(), ks.end(), std::greater<int>());
    return CorrelatorKey{g, k0, std::move(ks)};
}

int dimension_gap(const CorrelatorKey& key) {
    int degree = key.k0;
    for (int e : key.ks) {
        degree += e;
    }
    return dimension(key.g, key.n()) - degree;
}

KappaPsiKey make_kappa_psi(int g, std::vector<int> kappas, std::vector<int> ks) {
    if (g < 0) {
        throw InvalidDomain("genus must be nonnegative");
    }
    for (int a : kappas) {
        if (a < 1) {
            throw InvalidDomain("kappa indices must be >= 1");
        }
    }
    for (int e : ks) {
        if (e < 0) {
            throw InvalidDomain("psi-exponents must be nonnegative");
        }
    }
    if (!is_stable(g, static_cast<int>(ks.size()))) {
        throw InstabilityError("unstable (g, n); kappa factors do not count toward marked points");
    }
    std::sort(kappas.begin(), kappas.end(), std::greater<int>());
    std::sort(ks.begin(), ks.end(), std::greater<int>());
    return KappaPsiKey{g, std::move(kappas), std::move(ks)};
}

KappaPsiKey to_kappa_psi(const CorrelatorKey& key) {
    return make_kappa_psi(key.g, std::vector<int>(key.k0, 1), key.ks);
}

CorrelatorKey to_correlator(const KappaPsiKey& key) {
    for (int a : key.kappas) {
        if (a != 1) {
            throw InvalidDomain("only kappa1 factors convert to a CorrelatorKey");
        }
    }
    return canonicalize(key.g, static_cast<int>(key.kappas.size()), key.ks);
}

std::string print_correlator(const CorrelatorKey& key) {
    std::ostringstream out;
    out << '<';
    bool first = true;
    if (key.k0 > 0) {
        out << "kappa1";
        if (key.k0 > 1) {
            out << '^' << key.k0;
        }
        first = false;
    }
    // tau factors ascending by subscript, multiplicities as powers
    std::vector<int> asc(key.ks.rbegin(), key.ks.rend());
    for (std::size_t i = 0; i < asc.size();) {
        std::size_t j = i;
        while (j < asc.size() && asc[j] == asc[i]) {
            ++j;
        }
        if (!first) {
            out << ' ';
        }
        out << "tau" << asc[i];
        if (j - i > 1) {
            out << '^' << (j - i);
        }
        first = false;
        i = j;
    }
    out << ">_g=" << key.g;
    return out.str();
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    CorrelatorKey parse() {
        expect('<');
        int k0 = 0;
        std::vector<int> ks;
        parse_factor(k0, ks);
        while (peek() == ' ') {
            while (peek() == ' ') {
                ++pos_;
            }
            if (peek() == '>') {
                break;
            }
            parse_factor(k0, ks);
        }
        expect('>');
        expect('_');
        if (text_.substr(pos_, 2) == "g=") {
            pos_ += 2;
        }
        int g = parse_int("genus");
        if (pos_ != text_.size()) {
            throw SyntaxError("trailing input after correlator", pos_);
        }
        if (ks.empty()) {
            throw EmptyKeyError("correlator needs at least one tau factor");
        }
        return canonicalize(g, k0, std::move(ks));
    }

private:
    char peek() const {
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(char c) {
        if (peek() != c) {
            throw SyntaxError(std::string("expected '") + c + "'", pos_);
        }
        ++pos_;
    }

    int parse_int(const char* what) {
        std::size_t start = pos_;
        long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > 1'000'000) {
                throw SyntaxError(std::string(what) + " out of range", start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw SyntaxError(std::string("expected ") + what, pos_);
        }
        return static_cast<int>(value);
    }

    void parse_factor(int& k0, std::vector<int>& ks) {
        std::size_t start = pos_;
        std::size_t name_end = pos_;
        while (name_end < text_.size() &&
               std::isalpha(static_cast<unsigned char>(text_[name_end]))) {
            ++name_end;
        }
        std::string_view name = text_.substr(pos_, name_end - pos_);
        if (name == "kappa") {
            pos_ = name_end;
            int index = parse_int("kappa index");
            if (index != 1) {
                throw UnknownClassError("unknown class 'kappa" + std::to_string(index) + "'",
                                        start);
            }
            k0 += parse_multiplicity();
        } else if (name == "tau") {
            pos_ = name_end;
            int sub = parse_int("tau subscript");
            int mult = parse_multiplicity();
            ks.insert(ks.end(), mult, sub);
        } else if (name.empty()) {
            throw SyntaxError("expected a factor", pos_);
        } else {
            throw UnknownClassError("unknown class '" + std::string(name) + "'", start);
        }
    }

    int parse_multiplicity() {
        if (peek() != '^') {
            return 1;
        }
        ++pos_;
        std::size_t at = pos_;
        int m = parse_int("exponent");
        if (m < 1) {
            throw SyntaxError("exponent must be >= 1", at);
        }
        return m;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

CorrelatorKey parse_correlator(std::string_view text) {
    return Parser(text).parse();
}

} // namespace mgn
