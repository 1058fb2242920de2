#include "mgn/rational.hpp"

#include <stdexcept>

namespace mgn {

std::string to_fraction_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_minimal_string(const Rational& r) {
    return r.get_str();
}

Rational rational_from_string(const std::string& text) {
    Rational r;
    if (text.empty() || r.set_str(text, 10) != 0) {
        throw std::invalid_argument("malformed rational '" + text + "'");
    }
    if (r.get_den() == 0) {
        throw std::invalid_argument("zero denominator in '" + text + "'");
    }
    r.canonicalize();
    return r;
}

double to_double(const Rational& r) {
    return r.get_d();
}

} // namespace mgn
