#include "pileup/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace pileup {

namespace {

double particle_velocity(const InteractionLaw& law,
                         std::span<const double> x, std::span<const int> sign,
                         double t, std::span<const ForcingTerm> forcing,
                         std::size_t i) {
    const std::size_t n = x.size();
    double v = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double dx = x[i] - x[j];
        if (dx == 0.0) throw std::domain_error("coincident particle positions");
        v += static_cast<double>(sign[i] * sign[j]) * law.f(dx);
    }
    if (!forcing.empty())
        v += forcing[i].eval(t);
    else
        v += static_cast<double>(sign[i]) * law.g_ext().eval(x[i]);
    return v;
}

}  // namespace

std::vector<double> velocity_field_serial(const InteractionLaw& law,
                                          std::span<const double> x,
                                          std::span<const int> sign, double t,
                                          std::span<const ForcingTerm> forcing) {
    const std::size_t n = x.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = particle_velocity(law, x, sign, t, forcing, i);
    return v;
}

std::vector<double> velocity_field(const InteractionLaw& law,
                                   std::span<const double> x, std::span<const int> sign,
                                   double t, std::span<const ForcingTerm> forcing) {
    const std::size_t n = x.size();
    std::vector<double> v(n);
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
        try {
            v[i] = particle_velocity(law, x, sign, t, forcing,
                                     static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return v;
}

double gap_velocity(const InteractionLaw& law,
                    std::span<const double> x, std::span<const int> sign,
                    double t, std::size_t i,
                    std::span<const ForcingTerm> forcing) {
    const std::size_t n = x.size();
    if (i + 1 >= n) throw std::invalid_argument("gap index out of range");
    const double ri = x[i + 1] - x[i];
    if (ri == 0.0) throw std::domain_error("coincident particle positions");
    const int bi = sign[i], bi1 = sign[i + 1];

    double v = 2.0 * static_cast<double>(bi * bi1) * law.f(ri);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == i + 1) continue;
        double rik = x[i] - x[k];
        double bk = static_cast<double>(sign[k]);
        if (bi1 == -bi)
            v += -static_cast<double>(bi) * bk * law.kernel_g(rik, ri);
        else
            v += static_cast<double>(bi) * bk * law.kernel_h(rik, ri);
    }
    if (!forcing.empty())
        v += forcing[i + 1].eval(t) - forcing[i].eval(t);
    else
        v += static_cast<double>(bi1) * law.g_ext().eval(x[i + 1]) -
             static_cast<double>(bi) * law.g_ext().eval(x[i]);
    return v;
}

int contribution_sign(const InteractionLaw& law, int b_i, int b_j, int b_kappa,
                      Placement placement, double x_i, double x_j,
                      double x_kappa, double x_kappa1) {
    if (!(x_i < x_j)) throw std::invalid_argument("require x_i < x_j");

    // Exact summand of the dot r_{ji} expansion for one outside particle.
    auto summand = [&](double xk, int bk) {
        double rjk = x_j - xk;
        double rik = x_i - xk;
        return static_cast<double>(b_j * bk) * law.f(rjk) -
               static_cast<double>(b_i * bk) * law.f(rik);
    };

    double total = 0.0;
    switch (placement) {
        case Placement::SingleLeft:
            if (!(x_kappa < x_i)) throw std::domain_error("placement requires x_kappa < x_i");
            total = summand(x_kappa, b_kappa);
            break;
        case Placement::SingleRight:
            if (!(x_kappa > x_j)) throw std::domain_error("placement requires x_kappa > x_j");
            total = summand(x_kappa, b_kappa);
            break;
        case Placement::PairLeft:
            if (!(x_kappa < x_kappa1 && x_kappa1 < x_i))
                throw std::domain_error("placement requires x_kappa < x_kappa+1 < x_i");
            total = summand(x_kappa, b_kappa) + summand(x_kappa1, -b_kappa);
            break;
        case Placement::PairRight:
            if (!(x_j < x_kappa && x_kappa < x_kappa1))
                throw std::domain_error("placement requires x_j < x_kappa < x_kappa+1");
            total = summand(x_kappa, b_kappa) + summand(x_kappa1, -b_kappa);
            break;
    }
    if (total == 0.0) throw std::domain_error("contribution is exactly zero");
    return total > 0.0 ? 1 : -1;
}

}  // namespace pileup
