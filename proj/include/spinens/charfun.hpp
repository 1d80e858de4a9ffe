#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spinens/log_space.hpp"
#include "spinens/spectrum.hpp"

namespace spinens {

// derivatives of the leading-order log degeneracy diverge at the band edges;
// arguments this close to |q| = 1 are refused instead of returning infinities
inline constexpr double band_edge_eps = 1e-12;

namespace detail {

inline void check_band(double q, const char* where) {
    if (!(std::abs(q) <= 1.0))
        throw std::domain_error(std::string(where) + ": energy per spin " + std::to_string(q) +
                                " outside [-1, 1]");
}

inline void check_band_interior(double q, const char* where) {
    check_band(q, where);
    if (std::abs(q) > 1.0 - band_edge_eps)
        throw std::domain_error(std::string(where) + ": singular at the band edge |q| -> 1");
}

}  // namespace detail

// equilibrium fraction of spins in the m = 0 state at mean energy q per
// spin: the entropy-maximizing root, in [0, 1/3]
inline double zero_fraction(double q) {
    detail::check_band(q, "zero_fraction");
    return (std::sqrt(4.0 - 3.0 * q * q) - 1.0) / 3.0;
}

inline double zero_fraction_deriv(double q) {
    detail::check_band(q, "zero_fraction_deriv");
    return -q / std::sqrt(4.0 - 3.0 * q * q);
}

// per-spin occupation fractions of the m = -1, 0, +1 states
struct OccupationFractions {
    double minus = 0.0;
    double zero = 0.0;
    double plus = 0.0;

    double at(int s) const {
        switch (s) {
            case -1: return minus;
            case 0: return zero;
            case 1: return plus;
        }
        throw std::domain_error("OccupationFractions: spin state must be -1, 0 or +1");
    }
};

// wing fractions are (1 - zero +- q)/2; the smaller wing is recovered from
// the exact identity zero^2 = minus * plus, which stays accurate where the
// direct difference would cancel catastrophically near the band edges
inline OccupationFractions occupation_fractions(double q) {
    const double a = zero_fraction(q);
    const double big = (1.0 - a + std::abs(q)) / 2.0;
    const double small = a == 0.0 ? 0.0 : a * a / big;
    if (q >= 0.0) return {small, a, big};
    return {big, a, small};
}

// per-spin mixing entropy of the equilibrium occupation fractions
inline double occupation_entropy(double q) {
    const auto f = occupation_fractions(q);
    return -(xlogx(f.minus) + xlogx(f.zero) + xlogx(f.plus));
}

// leading-order ln D at energy n*q: extensive part of the log degeneracy
inline double log_degeneracy_leading(int n, double q) {
    if (n < 1) throw std::domain_error("log_degeneracy_leading: n must be >= 1");
    return n * occupation_entropy(q);
}

// d/dq of log_degeneracy_leading; positive for q < 0, zero at q = 0
inline double log_degeneracy_slope(int n, double q) {
    detail::check_band_interior(q, "log_degeneracy_slope");
    const auto f = occupation_fractions(q);
    return -0.5 * n * (std::log(f.plus) - std::log(f.minus));
}

// d^2/dq^2 of log_degeneracy_leading; negative on the open band
inline double log_degeneracy_curvature(int n, double q) {
    detail::check_band_interior(q, "log_degeneracy_curvature");
    const auto f = occupation_fractions(q);
    const double ap = zero_fraction_deriv(q);
    const double dplus = 0.5 * (1.0 - ap);   // d f_plus / dq
    const double dminus = -0.5 * (1.0 + ap); // d f_minus / dq
    return -0.5 * n * (dplus / f.plus - dminus / f.minus);
}

// curvature of the two-variable occupation entropy in the zero-fraction
// direction at its maximizer; strictly negative. The denominator identity
// (1-zero)^2 - q^2 = 4 zero^2 keeps it stable toward the band edges.
inline double occupation_curvature(int n, double q) {
    detail::check_band(q, "occupation_curvature");
    if (std::abs(q) >= 1.0)
        throw std::domain_error("occupation_curvature: singular at |q| = 1 where the zero fraction vanishes");
    const double a = zero_fraction(q);
    const double band = (1.0 - q) * (1.0 + q);
    return -n * (band - a) / (2.0 * a * a * a);
}

// leading-order log multiplicity at general zero fraction q0, not just the
// maximizer; q0 must lie in the admissible triangle 0 <= q0 <= 1 - |q|
inline double log_multiplicity(int n, double q, double q0) {
    detail::check_band(q, "log_multiplicity");
    if (q0 < 0.0 || q0 > std::min(1.0 + q, 1.0 - q) + 1e-15)
        throw std::domain_error("log_multiplicity: zero fraction " + std::to_string(q0) +
                                " outside the admissible triangle at q = " + std::to_string(q));
    const double fminus = std::max(0.0, (1.0 - q0 - q) / 2.0);
    const double fplus = std::max(0.0, (1.0 - q0 + q) / 2.0);
    return -n * (xlogx(fminus) + xlogx(q0) + xlogx(fplus));
}

// asymptotic log density of states per unit energy at total energy E
inline double log_density_of_states(int n, double energy) {
    if (n < 1) throw std::domain_error("log_density_of_states: n must be >= 1");
    const double q = energy / n;
    detail::check_band(q, "log_density_of_states");
    return std::log(static_cast<double>(n)) + log_degeneracy_leading(n, q);
}

// diagnostic: leading-order log degeneracy plus the saddle-point width
// correction -0.5 ln(|K|/2 pi); not a production path
inline double log_degeneracy_with_width(int n, double q) {
    return log_degeneracy_leading(n, q) -
           0.5 * std::log(std::abs(occupation_curvature(n, q)) / (2.0 * pi));
}

}  // namespace spinens
