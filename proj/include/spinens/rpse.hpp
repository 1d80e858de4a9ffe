#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "spinens/charfun.hpp"
#include "spinens/log_space.hpp"
#include "spinens/rdm.hpp"
#include "spinens/spectrum.hpp"

namespace spinens {

// Random pure-state ensemble: pure states uniform on the population simplex
// of the active space, the span of all product states with energy at or below
// the cutoff e_max. Exact counts are step functions of e_max: the cutoff is
// floored to the level grid and the boundary level is included.
struct RpseSpec {
    int n;
    double e_max;

    RpseSpec(int n_, double e_max_) : n(n_), e_max(e_max_) {
        if (n < 1) throw std::domain_error("RpseSpec: n must be >= 1, got " + std::to_string(n));
        if (e_max < -n)
            throw std::domain_error("RpseSpec: cutoff " + std::to_string(e_max) +
                                    " below the ground level leaves an empty active space");
        if (e_max > n)
            throw std::domain_error("RpseSpec: cutoff " + std::to_string(e_max) +
                                    " above the top of the band at n");
    }

    int cutoff_level() const { return static_cast<int>(std::floor(e_max)); }
    double q_max() const { return e_max / n; }
};

// per-spin mean energy and the squared-energy sum over dimension^2 of the
// uniform active-space state (the population-variance scale of the energy)
struct EnergyMoments {
    double u_mean = 0.0;
    double e_variance = 0.0;
};

struct ThermoState {
    double u = 0.0;     // internal energy per spin
    double s = 0.0;     // entropy per spin
    double beta = 0.0;  // inverse temperature, = ds/du
};

// active-space dimension by direct summation of level degeneracies
inline LogNumber rpse_dimension_exact(const RpseSpec& spec) {
    const Spectrum sp = full_spectrum(spec.n);
    const int cut = spec.cutoff_level();
    double acc = log_zero;
    for (const Level& lv : sp.levels) {
        if (lv.i > cut) break;
        acc = log_add(acc, lv.log_degeneracy);
    }
    return LogNumber::from_log(acc);
}

inline std::uint64_t rpse_dimension_exact_int(const RpseSpec& spec) {
    if (spec.n > exact_degeneracy_max_n)
        throw std::invalid_argument("rpse_dimension_exact_int: exact integer path limited to n <= " +
                                    std::to_string(exact_degeneracy_max_n));
    const Spectrum sp = full_spectrum(spec.n);
    const int cut = spec.cutoff_level();
    std::uint64_t acc = 0;
    for (const Level& lv : sp.levels) {
        if (lv.i > cut) break;
        acc += *lv.exact_degeneracy;
    }
    return acc;
}

// Gaussian-spectrum estimate of the dimension: 3^n times the Gaussian mass
// at or below the cutoff, carried in log space so deep tails stay finite
inline LogNumber rpse_dimension_gaussian(const RpseSpec& spec) {
    const double x = spec.e_max / std::sqrt(4.0 * spec.n / 3.0);
    return LogNumber::from_log(spec.n * ln3 - std::log(2.0) + log_erfc(-x));
}

namespace detail {

inline double log_simpson_rule(double ga, double gm, double gb, double width) {
    const double terms[3] = {ga, gm + std::log(4.0), gb};
    return std::log(width / 6.0) + log_sum_exp(terms);
}

template <class G>
double log_adaptive_panel(G& g, double a, double b, double ga, double gm, double gb, double whole,
                          int depth, int& evals) {
    if (depth <= 0 || evals > 500000)
        throw std::runtime_error("log_adaptive_panel: quadrature did not converge on [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "] after " +
                                 std::to_string(evals) + " evaluations");
    const double m = 0.5 * (a + b);
    const double glm = g(0.5 * (a + m));
    const double grm = g(0.5 * (m + b));
    evals += 2;
    const double left = log_simpson_rule(ga, glm, gm, m - a);
    const double right = log_simpson_rule(gm, grm, gb, b - m);
    const double refined = log_add(left, right);
    if (std::abs(refined - whole) < 1e-10 || (b - a) < 1e-13) return refined;
    return log_add(log_adaptive_panel(g, a, m, ga, glm, gm, left, depth - 1, evals),
                   log_adaptive_panel(g, m, b, gm, grm, gb, right, depth - 1, evals));
}

// adaptive Simpson quadrature of exp(g) carried entirely in the log domain;
// returns log of the integral
template <class G>
double log_adaptive_simpson(G&& g, double a, double b, int initial_panels = 16) {
    double total = log_zero;
    int evals = 0;
    double x0 = a;
    double gx0 = g(x0);
    ++evals;
    for (int k = 1; k <= initial_panels; ++k) {
        const double x1 = a + (b - a) * k / initial_panels;
        const double gm = g(0.5 * (x0 + x1));
        const double gx1 = g(x1);
        evals += 2;
        const double whole = log_simpson_rule(gx0, gm, gx1, x1 - x0);
        total = log_add(total, log_adaptive_panel(g, x0, x1, gx0, gm, gx1, whole, 40, evals));
        x0 = x1;
        gx0 = gx1;
    }
    return total;
}

}  // namespace detail

// continuum estimate of the dimension: n^2 times the integral of the
// leading-order degeneracy density over scaled energies up to q_max
inline LogNumber rpse_dimension_integral(const RpseSpec& spec) {
    const double qmax = spec.q_max();
    if (qmax <= -1.0)
        throw std::domain_error("rpse_dimension_integral: requires q_max > -1");
    const int n = spec.n;
    auto g = [n](double q) { return log_degeneracy_leading(n, q); };
    const double log_integral = detail::log_adaptive_simpson(g, -1.0, qmax);
    return LogNumber::from_log(2.0 * std::log(static_cast<double>(n)) + log_integral);
}

// leading-order ln(N_active / 3^n): zero at or above the band center, the
// extensive degeneracy deficit below it; the branches join continuously at 0.
// The optional prefactor adds the subleading tail-width factor (diagnostic).
inline double rpse_log_dimension_asymptotic(int n, double q_max, bool with_prefactor = false) {
    if (n < 1) throw std::domain_error("rpse_log_dimension_asymptotic: n must be >= 1");
    if (q_max < -1.0 || q_max > 1.0)
        throw std::domain_error("rpse_log_dimension_asymptotic: q_max " + std::to_string(q_max) +
                                " outside [-1, 1]");
    if (q_max >= 0.0) return 0.0;
    double value = log_degeneracy_leading(n, q_max) - n * ln3;
    if (with_prefactor)
        value += std::log(std::sqrt(std::abs(log_degeneracy_curvature(n, 0.0)) / (2.0 * pi)) /
                          log_degeneracy_slope(n, q_max));
    return value;
}

// mean energy of the uniform active-space state, exact; the signed numerator
// cancels to exactly zero on the full symmetric spectrum
inline EnergyMoments rpse_internal_energy_exact(const RpseSpec& spec) {
    const Spectrum sp = full_spectrum(spec.n);
    const int cut = spec.cutoff_level();
    double log_dim = cut >= 0 ? sp.level(0).log_degeneracy : log_zero;
    double log_sq = log_zero;
    // walk levels in +-i pairs so the signed chains see identical magnitude
    // sequences and cancel bit-exactly on the full symmetric spectrum
    SignedLogAccumulator first;
    for (int i = 1; i <= spec.n; ++i) {
        const double li = std::log(static_cast<double>(i));
        if (-i <= cut) {
            const double lm = sp.level(-i).log_degeneracy + li;
            log_dim = log_add(log_dim, sp.level(-i).log_degeneracy);
            first.add(lm, -1);
            log_sq = log_add(log_sq, lm + li);
        }
        if (i <= cut) {
            const double lm = sp.level(i).log_degeneracy + li;
            log_dim = log_add(log_dim, sp.level(i).log_degeneracy);
            first.add(lm, 1);
            log_sq = log_add(log_sq, lm + li);
        }
    }
    const auto [log_num, sign] = first.log_value();
    EnergyMoments out;
    out.u_mean = sign == 0 ? 0.0 : sign * std::exp(log_num - log_dim) / spec.n;
    out.e_variance = log_sq == log_zero ? 0.0 : std::exp(log_sq - 2.0 * log_dim);
    return out;
}

// leading-order internal energy per spin: 0 at or above the band center,
// q_max below it. Corrected mode subtracts the exponential-tail mean offset
// 1/slope; the sign is fixed against the exact path.
inline double rpse_internal_energy_asymptotic(int n, double q_max, bool corrected = false) {
    if (n < 1) throw std::domain_error("rpse_internal_energy_asymptotic: n must be >= 1");
    if (q_max < -1.0 || q_max > 1.0)
        throw std::domain_error("rpse_internal_energy_asymptotic: q_max " + std::to_string(q_max) +
                                " outside [-1, 1]");
    if (q_max >= 0.0) return 0.0;
    double u = q_max;
    if (corrected) u -= 1.0 / log_degeneracy_slope(n, q_max);
    return u;
}

// mean pure-state entropy over the ensemble: ln N_active - (1 - gamma);
// meaningless below two active states, where it is refused
inline double rpse_entropy_mean(const RpseSpec& spec) {
    const double log_dim = rpse_dimension_exact(spec).log();
    if (log_dim < std::log(2.0) - 1e-12)
        throw std::domain_error("rpse_entropy_mean: fewer than two active states at cutoff " +
                                std::to_string(spec.e_max));
    return log_dim - (1.0 - euler_gamma);
}

// per-spin entropy and inverse temperature as functions of the energy per
// spin; beta = ds/du, diverging at the band bottom
inline ThermoState entropy_equation_of_state(int n, double u) {
    if (n < 1) throw std::domain_error("entropy_equation_of_state: n must be >= 1");
    if (u < -1.0 || u > 0.0)
        throw std::domain_error("entropy_equation_of_state: energy per spin " + std::to_string(u) +
                                " outside [-1, 0]");
    if (u == -1.0)
        throw std::domain_error("entropy_equation_of_state: inverse temperature diverges at u = -1");
    return {u, occupation_entropy(u), log_degeneracy_slope(n, u) / n};
}

// exact mean reduced density matrix of one spin: each element is the fraction
// of active states whose first spin sits in state s, i.e. an (n-1)-spin
// active-space count over the n-spin count; the counts partition the space
inline RdmDiagonal rpse_rdm_exact(const RpseSpec& spec) {
    if (spec.n < 2)
        throw std::invalid_argument("rpse_rdm_exact: an environment requires n >= 2");
    const int cut = spec.cutoff_level();
    const Spectrum env = full_spectrum(spec.n - 1);
    double lognum[3];
    for (int s = -1; s <= 1; ++s) {
        double acc = log_zero;
        for (const Level& lv : env.levels) {
            if (lv.i > cut - s) break;
            acc = log_add(acc, lv.log_degeneracy);
        }
        lognum[s + 1] = acc;
    }
    const double logden = log_add(log_add(lognum[0], lognum[1]), lognum[2]);
    auto ratio = [&](int k) { return lognum[k] == log_zero ? 0.0 : std::exp(lognum[k] - logden); };
    return {ratio(0), ratio(1), ratio(2)};
}

// asymptotic reduced density matrix: the equilibrium occupation fractions at
// q_max, pinned at the q = 0 uniform state beyond the band center
inline RdmDiagonal rpse_rdm_asymptotic(double q_max) {
    if (q_max < -1.0 || q_max > 1.0)
        throw std::domain_error("rpse_rdm_asymptotic: q_max " + std::to_string(q_max) +
                                " outside [-1, 1]");
    const auto f = occupation_fractions(q_max < 0.0 ? q_max : 0.0);
    return {f.minus, f.zero, f.plus};
}

struct EntropyCheck {
    double global = 0.0;     // equation-of-state entropy per spin
    double canonical = 0.0;  // entropy of the canonical single-spin state at matching beta
};

// the per-spin entropy of the equation of state against the entropy of the
// canonical state exp(-s beta)/Q at the same inverse temperature; the two
// agree because the limiting occupation fractions are exactly exponential
inline EntropyCheck canonical_entropy_check(double q_max) {
    if (q_max < -1.0 || q_max > 0.0)
        throw std::domain_error("canonical_entropy_check: q_max " + std::to_string(q_max) +
                                " outside [-1, 0]");
    if (q_max == -1.0) return {0.0, 0.0};  // pure ground state at the band edge
    const ThermoState st = entropy_equation_of_state(1, q_max);
    return {st.s, rdm_entropy(canonical_rdm(st.beta))};
}

}  // namespace spinens
