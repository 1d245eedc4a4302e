#ifndef PILEUP_SYSTEM_HPP
#define PILEUP_SYSTEM_HPP

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pileup/interaction.hpp"

namespace pileup {

// State of the signed-particle system. Arrays are indexed by the original
// particle label; annihilated particles keep their last position with
// alive = false.
struct ParticleSystem {
    std::vector<double> x;
    std::vector<int> sign;       // +1 or -1
    std::vector<char> alive;
    bool reduced = false;        // reduced mode: F_i(t) replaces b_i g(x_i)
    std::vector<ForcingTerm> forcing;  // per label, used in reduced mode

    ParticleSystem() = default;
    ParticleSystem(std::vector<double> positions, std::vector<int> signs)
        : x(std::move(positions)), sign(std::move(signs)), alive(x.size(), 1) {
        validate();
    }

    void validate() const {
        if (x.size() != sign.size())
            throw std::invalid_argument("positions and signs length mismatch");
        for (int s : sign)
            if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
        if (reduced && forcing.size() != x.size())
            throw std::invalid_argument("reduced mode requires one forcing term per particle");
    }

    std::size_t n_total() const { return x.size(); }

    std::size_t n_alive() const {
        std::size_t n = 0;
        for (char a : alive) n += (a != 0);
        return n;
    }

    std::vector<std::size_t> alive_labels() const {
        std::vector<std::size_t> out;
        out.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            if (alive[i]) out.push_back(i);
        return out;
    }

    std::vector<double> alive_positions() const {
        std::vector<double> out;
        out.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            if (alive[i]) out.push_back(x[i]);
        return out;
    }

    std::vector<int> alive_signs() const {
        std::vector<int> out;
        out.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            if (alive[i]) out.push_back(sign[i]);
        return out;
    }

    bool strictly_ordered() const {
        double prev = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!alive[i]) continue;
            if (!(x[i] > prev)) return false;
            prev = x[i];
        }
        return true;
    }
};

// Neighbor gaps r_i = x_{i+1} - x_i of a packed (alive-only) position vector.
// Convention: r_0 = r_n = +inf, with f(r_0) = f(r_n) = 0 when referenced.
struct GapView {
    const std::vector<double>& x;

    explicit GapView(const std::vector<double>& positions) : x(positions) {}

    std::size_t n() const { return x.size(); }

    // r_i = x[i+1] - x[i] for 0 <= i < n-1; r_{-1} and r_{n-1} are +inf.
    double r(long i) const {
        if (i < 0 || i + 1 >= static_cast<long>(x.size()))
            return std::numeric_limits<double>::infinity();
        return x[i + 1] - x[i];
    }

    // r_{ji} = x[j] - x[i]
    double r_of(std::size_t j, std::size_t i) const { return x[j] - x[i]; }

    double min_gap() const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < x.size(); ++i) m = std::min(m, x[i + 1] - x[i]);
        return m;
    }
};

inline std::vector<double> neighbor_gaps(const std::vector<double>& x) {
    std::vector<double> r;
    if (x.size() > 1) {
        r.reserve(x.size() - 1);
        for (std::size_t i = 0; i + 1 < x.size(); ++i) r.push_back(x[i + 1] - x[i]);
    }
    return r;
}

inline double min_gap(const std::vector<double>& x) { return GapView(x).min_gap(); }

}  // namespace pileup

#endif
