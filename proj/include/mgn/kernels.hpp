#ifndef MGN_KERNELS_HPP
#define MGN_KERNELS_HPP

#include <functional>
#include <vector>

namespace mgn {

struct KernelEvalConfig {
    int quadrature_points = 32; // Gauss-Legendre nodes per panel, >= 16
    int series_terms = 48;      // alternating-series terms, >= 8
    double tolerance = 1e-9;    // > 0

    void validate() const; // throws std::invalid_argument on violation
};

// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] with deterministic panel layout.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const KernelEvalConfig& cfg);

// h(x) = 2 / (1 + e^{x/2})
double eval_h(double x);

// (1/4x) int_0^x [h(z+t+y) + h(z-t-y) + h(z+t-y) + h(z-t+y)] dt, x > 0.
double eval_R(double x, double y, double z, const KernelEvalConfig& cfg = {});

// (1/2x) int_0^x [h(t+y+z) + h(-t+y+z)] dt, x > 0; depends on y+z only.
double eval_D(double x, double y, double z, const KernelEvalConfig& cfg = {});

struct VerifyPair {
    double closed_form = 0;
    double numeric = 0;
};

// P^n e^{-alpha x} via the closed form sum_j A_j^{(n)} x^j alpha^{j-2n} e^{-alpha x}
// and via nested numeric integration of P f(x) = int_x^inf t f(t) dt.
// alpha > 0, x >= 0, n <= 6.
VerifyPair verify_p_exponential(int n, double alpha, double x,
                                const KernelEvalConfig& cfg = {});

// P_x^n P_y^m h^{(2k)}(x+y)|_{x,y=0} via f_kernel_value (closed form) and via
// the termwise series h(x) = 2 sum_{j>=1} (-1)^{j+1} e^{-jx/2} with
// acceleration of the alternating tail. n, m <= 3, k <= n+m+1.
VerifyPair verify_corollary(int n, int m, int k, const KernelEvalConfig& cfg = {});

// Repeated pairwise averaging of partial sums (van Wijngaarden). Returns the
// accelerated sum; if remainder_estimate is non-null it receives the change
// contributed by the last averaging level.
double accelerate_alternating(const std::vector<double>& terms,
                              double* remainder_estimate = nullptr);

// Numeric P^n e^{-alpha x}; building block of verify_p_exponential, exposed
// for tests.
double p_power_exp_numeric(int n, double alpha, double x,
                           const KernelEvalConfig& cfg = {});

} // namespace mgn

#endif
