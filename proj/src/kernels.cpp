#include "mgn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "mgn/coefficients.hpp"
#include "mgn/errors.hpp"

namespace mgn {

void KernelEvalConfig::validate() const {
    if (!(tolerance > 0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
    if (quadrature_points < 16) {
        throw std::invalid_argument("quadrature_points must be >= 16");
    }
    if (series_terms < 8) {
        throw std::invalid_argument("series_terms must be >= 8");
    }
}

const GaussLegendreRule& gauss_legendre(int order) {
    if (order < 1) {
        throw std::invalid_argument("quadrature order must be positive");
    }
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) {
        return it->second;
    }
    GaussLegendreRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration on P_order from the usual asymptotic first guess
        double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) * z * p2 - j * p3) / (j + 1);
            }
            pp = order * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) {
                break;
            }
        }
        rule.nodes[i] = -z;
        rule.nodes[order - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[order - 1 - i] = rule.weights[i];
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const KernelEvalConfig& cfg) {
    cfg.validate();
    if (!(b > a)) {
        return 0.0;
    }
    if (b - a > 1e5) {
        throw InvalidDomain("integration range too large");
    }
    const GaussLegendreRule& rule = gauss_legendre(cfg.quadrature_points);
    int panels = std::max(1, static_cast<int>(std::ceil(b - a)));
    double width = (b - a) / panels;
    double total = 0;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * width;
        double mid = lo + 0.5 * width;
        double half = 0.5 * width;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            total += half * rule.weights[i] * f(mid + half * rule.nodes[i]);
        }
    }
    return total;
}

double eval_h(double x) {
    return 2.0 / (1.0 + std::exp(0.5 * x));
}

double eval_R(double x, double y, double z, const KernelEvalConfig& cfg) {
    cfg.validate();
    if (!(x > 0)) {
        throw InvalidDomain("eval_R requires x > 0");
    }
    if (y < 0 || z < 0) {
        throw InvalidDomain("eval_R requires y, z >= 0");
    }
    auto integrand = [y, z](double t) {
        return eval_h(z + t + y) + eval_h(z - t - y) + eval_h(z + t - y) + eval_h(z - t + y);
    };
    return integrate(integrand, 0.0, x, cfg) / (4.0 * x);
}

double eval_D(double x, double y, double z, const KernelEvalConfig& cfg) {
    cfg.validate();
    if (!(x > 0)) {
        throw InvalidDomain("eval_D requires x > 0");
    }
    if (y < 0 || z < 0) {
        throw InvalidDomain("eval_D requires y, z >= 0");
    }
    double s = y + z; // the integrand depends on y + z only
    auto integrand = [s](double t) { return eval_h(t + s) + eval_h(-t + s); };
    return integrate(integrand, 0.0, x, cfg) / (2.0 * x);
}

namespace {

// Barycentric weights for Lagrange interpolation through `nodes`. The basis
// is affine-invariant, so callers pass panel-local scaled coordinates and the
// weights stay well inside double range for any panel width.
std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
    std::size_t m = nodes.size();
    std::vector<double> w(m, 1.0);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            if (i != j) {
                w[j] /= (nodes[j] - nodes[i]);
            }
        }
    }
    return w;
}

// All Lagrange basis values L_j(s) for the given nodes.
void basis_at(const std::vector<double>& nodes, const std::vector<double>& bary, double s,
              std::vector<double>& out) {
    std::size_t m = nodes.size();
    out.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double d = s - nodes[j];
        if (std::abs(d) < 1e-14) {
            out[j] = 1.0;
            return;
        }
    }
    double denom = 0;
    for (std::size_t j = 0; j < m; ++j) {
        out[j] = bary[j] / (s - nodes[j]);
        denom += out[j];
    }
    for (std::size_t j = 0; j < m; ++j) {
        out[j] /= denom;
    }
}

struct Panel {
    double lo = 0, hi = 0;
    std::vector<double> nodes;           // Gauss-Legendre nodes in [lo, hi]
    std::vector<double> full_weights;    // integrate s*F(s) over the panel
    std::vector<std::vector<double>> partial; // [i][j]: integrate s*L_j from nodes[i] to hi
};

} // namespace

double p_power_exp_numeric(int n, double alpha, double x, const KernelEvalConfig& cfg) {
    cfg.validate();
    if (!(alpha > 0)) {
        throw InvalidDomain("alpha must be positive");
    }
    if (x < 0) {
        throw InvalidDomain("x must be nonnegative");
    }
    if (n < 0 || n > 6) {
        throw InvalidDomain("nesting depth limited to n <= 6");
    }
    if (n == 0) {
        return std::exp(-alpha * x);
    }

    const double T = x + 60.0 / alpha + 10.0;
    const double width = std::min(1.0, 4.0 / alpha);
    const int npan = static_cast<int>(std::ceil((T - x) / width));
    if (npan > 20000) {
        throw NonConvergence("decay too slow to truncate the improper integral");
    }
    const int p = cfg.quadrature_points;
    const GaussLegendreRule& rule = gauss_legendre(p);

    // panel-local scaled coordinates u in [0, 1]; identical for every panel
    std::vector<double> unodes(p);
    for (int i = 0; i < p; ++i) {
        unodes[i] = 0.5 * (1.0 + rule.nodes[i]);
    }
    const std::vector<double> bary = barycentric_weights(unodes);
    std::vector<double> basis;

    std::vector<Panel> panels(npan);
    for (int q = 0; q < npan; ++q) {
        Panel& panel = panels[q];
        panel.lo = x + q * width;
        panel.hi = panel.lo + width;
        panel.nodes.resize(p);
        panel.full_weights.resize(p);
        for (int i = 0; i < p; ++i) {
            panel.nodes[i] = panel.lo + width * unodes[i];
            panel.full_weights[i] = 0.5 * width * rule.weights[i] * panel.nodes[i];
        }
        panel.partial.assign(p, std::vector<double>(p, 0.0));
        for (int i = 0; i < p; ++i) {
            double ulo = unodes[i];
            double umid = 0.5 * (ulo + 1.0);
            double uhalf = 0.5 * (1.0 - ulo);
            for (int kq = 0; kq < p; ++kq) {
                double u = umid + uhalf * rule.nodes[kq];
                double s = panel.lo + width * u;
                double ws = uhalf * width * rule.weights[kq] * s;
                basis_at(unodes, bary, u, basis);
                for (int j = 0; j < p; ++j) {
                    panel.partial[i][j] += ws * basis[j];
                }
            }
        }
    }

    // level 0
    std::vector<std::vector<double>> values(npan, std::vector<double>(p));
    for (int q = 0; q < npan; ++q) {
        for (int i = 0; i < p; ++i) {
            values[q][i] = std::exp(-alpha * panels[q].nodes[i]);
        }
    }

    // Truncation-tail bookkeeping: tail_k is the neglected integral past T at
    // level k, propagated with the worst-case amplification int_x^T s ds.
    double running_tail = 0.0;
    const double amplify = 0.5 * (T * T - x * x);
    auto tail_estimate = [&](const std::vector<double>& last_panel) {
        double fa = std::abs(last_panel[p - 2]);
        double fb = std::abs(last_panel[p - 1]);
        double dt = panels[npan - 1].nodes[p - 1] - panels[npan - 1].nodes[p - 2];
        if (fb <= 0) {
            return 0.0;
        }
        double decay = (fa > fb) ? std::log(fa / fb) / dt : 0.0;
        if (decay <= 0) {
            throw NonConvergence("integrand does not decay at the truncation point");
        }
        // |int_T^inf t F dt| <= |F(T)| (T/decay + 1/decay^2), F(T) <= fb
        return fb * (T / decay + 1.0 / (decay * decay));
    };

    for (int level = 1; level < n; ++level) {
        running_tail = running_tail * amplify + tail_estimate(values[npan - 1]);
        std::vector<double> suffix(npan + 1, 0.0);
        for (int q = npan - 1; q >= 0; --q) {
            double s = 0;
            for (int i = 0; i < p; ++i) {
                s += panels[q].full_weights[i] * values[q][i];
            }
            suffix[q] = suffix[q + 1] + s;
        }
        std::vector<std::vector<double>> next(npan, std::vector<double>(p));
        for (int q = 0; q < npan; ++q) {
            for (int i = 0; i < p; ++i) {
                double v = suffix[q + 1];
                for (int j = 0; j < p; ++j) {
                    v += panels[q].partial[i][j] * values[q][j];
                }
                next[q][i] = v;
            }
        }
        values = std::move(next);
    }

    running_tail = running_tail * amplify + tail_estimate(values[npan - 1]);
    double result = 0;
    for (int q = 0; q < npan; ++q) {
        for (int i = 0; i < p; ++i) {
            result += panels[q].full_weights[i] * values[q][i];
        }
    }
    if (running_tail > cfg.tolerance * std::max(1.0, std::abs(result))) {
        throw NonConvergence("truncation tail exceeds tolerance");
    }
    return result;
}

VerifyPair verify_p_exponential(int n, double alpha, double x, const KernelEvalConfig& cfg) {
    cfg.validate();
    if (!(alpha > 0)) {
        throw InvalidDomain("alpha must be positive");
    }
    if (x < 0) {
        throw InvalidDomain("x must be nonnegative");
    }
    if (n < 0 || n > 6) {
        throw InvalidDomain("nesting depth limited to n <= 6");
    }
    double closed = 0;
    for (int j = 0; j <= n; ++j) {
        closed += to_double(a_coeff(n, j)) * std::pow(x, j) * std::pow(alpha, j - 2 * n);
    }
    closed *= std::exp(-alpha * x);
    return VerifyPair{closed, p_power_exp_numeric(n, alpha, x, cfg)};
}

double accelerate_alternating(const std::vector<double>& terms, double* remainder_estimate) {
    if (terms.empty()) {
        if (remainder_estimate) {
            *remainder_estimate = 0;
        }
        return 0;
    }
    std::vector<double> s(terms.size());
    double run = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        run += terms[i];
        s[i] = run;
    }
    double spread = 0;
    while (s.size() > 1) {
        spread = std::abs(s[1] - s[0]);
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            s[i] = 0.5 * (s[i] + s[i + 1]);
        }
        s.pop_back();
    }
    if (remainder_estimate) {
        *remainder_estimate = 0.5 * spread;
    }
    return s[0];
}

VerifyPair verify_corollary(int n, int m, int k, const KernelEvalConfig& cfg) {
    cfg.validate();
    if (n < 0 || m < 0 || k < 0) {
        throw InvalidDomain("n, m, k must be nonnegative");
    }
    if (n > 3 || m > 3) {
        throw InvalidDomain("series verification limited to n, m <= 3");
    }
    if (k > n + m + 1) {
        throw InvalidDomain("k limited to n + m + 1");
    }
    double closed = f_kernel_value(n, m, k).approx();

    // h(x) = 2 sum_{j>=1} (-1)^{j+1} e^{-jx/2}; applying P^n, P^m and 2k
    // derivatives termwise leaves (2n-1)!!(2m-1)!! (j/2)^{2k-2n-2m} per term.
    double prefactor = 2.0 * to_double(Rational(double_factorial(2L * n - 1) *
                                                double_factorial(2L * m - 1)));
    int expo = 2 * (k - n - m);
    std::vector<double> terms(cfg.series_terms);
    for (int j = 1; j <= cfg.series_terms; ++j) {
        double sign = (j % 2 == 1) ? 1.0 : -1.0;
        terms[j - 1] = prefactor * sign * std::pow(0.5 * j, expo);
    }
    double remainder = 0;
    double series = accelerate_alternating(terms, &remainder);
    if (remainder > cfg.tolerance * std::max(1.0, std::abs(closed))) {
        throw NonConvergence("alternating-series remainder exceeds tolerance");
    }
    return VerifyPair{closed, series};
}

} // namespace mgn
