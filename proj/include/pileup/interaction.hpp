#ifndef PILEUP_INTERACTION_HPP
#define PILEUP_INTERACTION_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace pileup {

// Smooth odd regular part added on top of the singular kernel.
struct RegularPart {
    enum class Kind { Zero, Linear, Cubic, Sine };
    Kind kind = Kind::Zero;
    double p0 = 0.0;  // slope / coeff / amplitude
    double p1 = 0.0;  // frequency (Sine only)

    static RegularPart zero() { return {}; }
    static RegularPart linear(double slope) { return {Kind::Linear, slope, 0.0}; }
    static RegularPart cubic(double coeff) { return {Kind::Cubic, coeff, 0.0}; }
    static RegularPart sine(double amplitude, double frequency) {
        return {Kind::Sine, amplitude, frequency};
    }

    double eval(double x) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Linear: return p0 * x;
            case Kind::Cubic: return p0 * x * x * x;
            case Kind::Sine: return p0 * std::sin(p1 * x);
        }
        return 0.0;
    }
    double deriv1(double x) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Linear: return p0;
            case Kind::Cubic: return 3.0 * p0 * x * x;
            case Kind::Sine: return p0 * p1 * std::cos(p1 * x);
        }
        return 0.0;
    }
    double deriv2(double x) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Linear: return 0.0;
            case Kind::Cubic: return 6.0 * p0 * x;
            case Kind::Sine: return -p0 * p1 * p1 * std::sin(p1 * x);
        }
        return 0.0;
    }
    // sup |f_reg| over [-R, R]
    double bound_on(double R) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Linear: return std::abs(p0) * R;
            case Kind::Cubic: return std::abs(p0) * R * R * R;
            case Kind::Sine: return std::abs(p0);
        }
        return 0.0;
    }
    bool is_zero() const { return kind == Kind::Zero; }
};

// External force g, Lipschitz on R.
struct ExternalForce {
    enum class Kind { Zero, Constant, Affine, Sine };
    Kind kind = Kind::Zero;
    double p0 = 0.0;  // value / slope / amplitude
    double p1 = 0.0;  // intercept / frequency
    double p2 = 0.0;  // phase (Sine only)

    static ExternalForce zero() { return {}; }
    static ExternalForce constant(double v) { return {Kind::Constant, v, 0.0, 0.0}; }
    static ExternalForce affine(double slope, double intercept) {
        return {Kind::Affine, slope, intercept, 0.0};
    }
    static ExternalForce sine(double amplitude, double frequency, double phase) {
        return {Kind::Sine, amplitude, frequency, phase};
    }

    double eval(double x) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Constant: return p0;
            case Kind::Affine: return p0 * x + p1;
            case Kind::Sine: return p0 * std::sin(p1 * x + p2);
        }
        return 0.0;
    }
    double lipschitz_constant() const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Constant: return 0.0;
            case Kind::Affine: return std::abs(p0);
            case Kind::Sine: return std::abs(p0 * p1);
        }
        return 0.0;
    }
    // sup |g| over [lo, hi]
    double bound_on(double lo, double hi) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Constant: return std::abs(p0);
            case Kind::Affine:
                return std::max(std::abs(p0 * lo + p1), std::abs(p0 * hi + p1));
            case Kind::Sine: return std::abs(p0);
        }
        return 0.0;
    }
    bool is_zero() const { return kind == Kind::Zero; }
};

// Per-particle forcing term F_i(t) used by the reduced (single-collision) mode.
struct ForcingTerm {
    enum class Kind { Zero, Constant, Sine };
    Kind kind = Kind::Zero;
    double p0 = 0.0;  // value / amplitude
    double p1 = 0.0;  // frequency
    double p2 = 0.0;  // phase

    static ForcingTerm zero() { return {}; }
    static ForcingTerm constant(double v) { return {Kind::Constant, v, 0.0, 0.0}; }
    static ForcingTerm sine(double amplitude, double frequency, double phase) {
        return {Kind::Sine, amplitude, frequency, phase};
    }

    double eval(double t) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Constant: return p0;
            case Kind::Sine: return p0 * std::sin(p1 * t + p2);
        }
        return 0.0;
    }
    double bound() const { return std::abs(p0); }
};

// Pairwise interaction law f(x) = sgn(x)/|x|^a + f_reg(x).
class InteractionLaw {
  public:
    InteractionLaw(double a, RegularPart f_reg = RegularPart::zero(),
                   ExternalForce g_ext = ExternalForce::zero())
        : a_(a), f_reg_(f_reg), g_ext_(g_ext) {
        if (!(a > 0.0))
            throw std::invalid_argument("singularity exponent a must be positive");
    }

    double a() const { return a_; }
    const RegularPart& f_reg() const { return f_reg_; }
    const ExternalForce& g_ext() const { return g_ext_; }
    bool pure() const { return f_reg_.is_zero(); }

    // f(x) = sgn(x)/|x|^a + f_reg(x)
    double f(double x) const {
        if (x == 0.0) throw std::domain_error("f evaluated at x = 0");
        double ax = std::abs(x);
        double s = (x > 0.0) ? 1.0 : -1.0;
        return s * std::pow(ax, -a_) + f_reg_.eval(x);
    }

    // Singular part only.
    double f_singular(double x) const {
        if (x == 0.0) throw std::domain_error("f_a evaluated at x = 0");
        double s = (x > 0.0) ? 1.0 : -1.0;
        return s * std::pow(std::abs(x), -a_);
    }

    // Analytic derivative of f of the given order (1 or 2).
    double f_deriv(double x, int order) const {
        if (x == 0.0) throw std::domain_error("f' evaluated at x = 0");
        double ax = std::abs(x);
        if (order == 1)
            return -a_ * std::pow(ax, -a_ - 1.0) + f_reg_.deriv1(x);
        if (order == 2) {
            double s = (x > 0.0) ? 1.0 : -1.0;
            return s * a_ * (a_ + 1.0) * std::pow(ax, -a_ - 2.0) + f_reg_.deriv2(x);
        }
        throw std::invalid_argument("derivative order must be 1 or 2");
    }

    // g(r; rho) = f(rho + r) + f(r): net effect of an outside particle on a
    // gap of width rho when the bracketing signs are opposite.
    double kernel_g(double r, double rho) const {
        check_kernel_args(r, rho);
        return f(rho + r) + f(r);
    }

    // h(r; rho) = f(rho + r) - f(r): same for equal bracketing signs.
    double kernel_h(double r, double rho) const {
        check_kernel_args(r, rho);
        return f(rho + r) - f(r);
    }

  private:
    void check_kernel_args(double r, double rho) const {
        if (!(rho > 0.0)) throw std::invalid_argument("kernel parameter rho must be positive");
        if (r == 0.0 || r == -rho)
            throw std::domain_error("kernel evaluated at a singular point");
    }

    double a_;
    RegularPart f_reg_;
    ExternalForce g_ext_;
};

}  // namespace pileup

#endif
