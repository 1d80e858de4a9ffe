#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinens/log_space.hpp"
#include "spinens/rdm.hpp"
#include "spinens/spectrum.hpp"

namespace spinens {

// Fixed expectation-energy ensemble: pure states constrained to expectation
// energy U, with the factorized single-population distributions whose means
// are computed below. The approximation is only valid while the derived mean
// ground population stays in [0, 1].
struct FeeeSpec {
    int n;
    double energy;  // expectation energy U; the ground level sits at -n

    FeeeSpec(int n_, double energy_) : n(n_), energy(energy_) {
        if (n < 1) throw std::domain_error("FeeeSpec: n must be >= 1, got " + std::to_string(n));
        if (n > 646)  // the population means are linear-space sums over 3^n states
            throw std::domain_error("FeeeSpec: 3^n overflows a double for n = " +
                                    std::to_string(n));
        if (energy < -n || energy > n)
            throw std::domain_error("FeeeSpec: energy " + std::to_string(energy) +
                                    " outside the spectrum band [-n, n]");
    }
};

struct EntropyStats {
    double mean = 0.0;
    double std_dev = 0.0;
    double domain_width = 0.0;  // full entropy range n ln 3
};

struct LevelMean {
    int i = 0;                    // level energy
    double per_state_mean = 0.0;  // mean population of each state in the level
};

struct PopulationMeans {
    double ground_mean = 0.0;           // the single state at energy -n
    std::vector<LevelMean> level_means; // levels above the ground state
};

namespace detail {

// Sum over all states above the ground state of 1/(E - E_1)^p, as a
// degeneracy-weighted level sum; the ground level holds exactly one state.
inline double excited_inverse_power_sum(const Spectrum& sp, int p) {
    const int n = sp.spec.n;
    return level_sum(
        sp, [n, p](double e) { return p == 1 ? 1.0 / (e + n) : 1.0 / ((e + n) * (e + n)); },
        [n](int i) { return i > -n; });
}

inline double feee_ground_mean(const FeeeSpec& spec, const Spectrum& sp) {
    const double dim = std::pow(3.0, spec.n);
    const double p1 =
        1.0 - (spec.energy + spec.n) / (dim - 1.0) * excited_inverse_power_sum(sp, 1);
    if (p1 < 0.0 || p1 > 1.0)
        throw std::domain_error("feee: mean ground population " + std::to_string(p1) +
                                " outside [0, 1]; the factorized distribution is invalid at U = " +
                                std::to_string(spec.energy));
    return p1;
}

}  // namespace detail

// mean populations of the factorized ensemble: the ground state carries
// 1 - (U - E_1)/(N - 1) * sum 1/(E - E_1); every other state carries
// (U - E_1)/[(N - 1)(E - E_1)]. Normalization and energy reconstruction
// hold identically.
inline PopulationMeans feee_population_means(const FeeeSpec& spec) {
    const Spectrum sp = full_spectrum(spec.n);
    PopulationMeans out;
    out.ground_mean = detail::feee_ground_mean(spec, sp);
    const double scale = (spec.energy + spec.n) / (std::pow(3.0, spec.n) - 1.0);
    out.level_means.reserve(sp.levels.size() - 1);
    for (const Level& lv : sp.levels)
        if (lv.i > -spec.n) out.level_means.push_back({lv.i, scale / (lv.i + spec.n)});
    return out;
}

// mean and standard deviation of the pure-state entropy over the ensemble.
// The default mean is the leading-order closed form; exact_mean evaluates
// -sum <P> ln <P> - (1 - gamma)(1 - <P_1>), which is the true mean of the
// factorized distribution.
inline EntropyStats feee_entropy_stats(const FeeeSpec& spec, bool exact_mean = false) {
    const Spectrum sp = full_spectrum(spec.n);
    const double p1 = detail::feee_ground_mean(spec, sp);
    const double dim = std::pow(3.0, spec.n);
    const double log_dim = spec.n * ln3;
    const double excited = spec.energy + spec.n;  // U - E_1

    EntropyStats out;
    out.domain_width = log_dim;
    out.std_dev = excited * (log_dim / dim) * std::sqrt(detail::excited_inverse_power_sum(sp, 2));
    if (!exact_mean) {
        out.mean = excited * (log_dim / dim) * detail::excited_inverse_power_sum(sp, 1);
        return out;
    }
    const double scale = excited / (dim - 1.0);
    double mean = -xlogx(p1);
    for (const Level& lv : sp.levels) {
        if (lv.i == -spec.n) continue;
        mean -= lv.degeneracy_as_double() * xlogx(scale / (lv.i + spec.n));
    }
    mean -= (1.0 - euler_gamma) * (1.0 - p1);
    out.mean = mean;
    return out;
}

// large-n limit: mean (U + n) ln 3, relative spread 1/sqrt(3^n); the slope
// d<S>/dU = ln 3 is energy-independent, which is the ensemble's failure mode
inline EntropyStats feee_entropy_asymptotic(const FeeeSpec& spec) {
    EntropyStats out;
    out.domain_width = spec.n * ln3;
    out.mean = (spec.energy + spec.n) * ln3;
    out.std_dev = out.mean * std::exp(-0.5 * spec.n * ln3);
    return out;
}

// mean single-spin reduced density matrix: environment sums run over the
// (n-1)-spin spectrum, and the minus element closes the trace exactly
inline RdmDiagonal feee_rdm_mean(const FeeeSpec& spec) {
    const Spectrum sp = full_spectrum(spec.n);
    detail::feee_ground_mean(spec, sp);  // validity gate
    const double scale = (spec.energy + spec.n) / (std::pow(3.0, spec.n) - 1.0);
    double mu[2];  // s = 0, +1
    if (spec.n == 1) {
        // formal mode: the environment degenerates to one zero-energy level
        for (int s = 0; s <= 1; ++s) mu[s] = scale / (s + 1.0);
    } else {
        const Spectrum env = full_spectrum(spec.n - 1);
        const int n = spec.n;
        for (int s = 0; s <= 1; ++s)
            mu[s] = scale * level_sum(env, [s, n](double e) { return 1.0 / (s + e + n); });
    }
    return {1.0 - mu[0] - mu[1], mu[0], mu[1]};
}

// large-n limit of the mean reduced density matrix at energy u per spin
inline RdmDiagonal feee_rdm_asymptotic(double u) {
    if (u < -1.0 || u > 0.0)
        throw std::domain_error("feee_rdm_asymptotic: energy per spin " + std::to_string(u) +
                                " outside [-1, 0]");
    return {(1.0 - 2.0 * u) / 3.0, (u + 1.0) / 3.0, (u + 1.0) / 3.0};
}

// large-n limit of the canonical-deviation parameter; nonzero everywhere in
// the interior, so the ensemble never becomes canonical
inline double r_asymptotic(double u) {
    if (u < -1.0 || u > 0.0)
        throw std::domain_error("r_asymptotic: energy per spin " + std::to_string(u) +
                                " outside [-1, 0]");
    if (u == -1.0)
        throw std::domain_error("r_asymptotic: singular at u = -1 where the zero weight vanishes");
    return -3.0 * u / (u + 1.0);
}

}  // namespace spinens
