#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinens/log_space.hpp"

namespace spinens {

inline constexpr double ln3 = 1.0986122886681098;

// exact integer degeneracies exist up to here; beyond, only the log path
inline constexpr int exact_degeneracy_max_n = 30;
// full basis enumeration cap: 3^12 = 531441 states
inline constexpr int enumerate_basis_max_n = 12;

// n identical three-level (J=1) spins in reduced units hbar*omega0 = kB = 1.
// Level energies are the integers i in [-n, n]; the Hilbert dimension is 3^n.
struct SpinSystemSpec {
    int n;

    explicit SpinSystemSpec(int n_) : n(n_) {
        if (n < 1) throw std::domain_error("SpinSystemSpec: n must be >= 1, got " + std::to_string(n));
    }

    double log_dimension() const { return n * ln3; }
};

inline std::uint64_t pow3(int n) {
    std::uint64_t r = 1;
    for (int k = 0; k < n; ++k) r *= 3;
    return r;
}

// occupation counts of the m = -1, 0, +1 single-spin states
struct OccupationTriple {
    int minus = 0;
    int zero = 0;
    int plus = 0;

    int total() const { return minus + zero + plus; }
    int energy() const { return plus - minus; }
};

struct Level {
    int i = 0;
    double log_degeneracy = log_zero;
    std::optional<std::uint64_t> exact_degeneracy;  // present when n <= exact_degeneracy_max_n

    double degeneracy_as_double() const {
        return exact_degeneracy ? static_cast<double>(*exact_degeneracy) : std::exp(log_degeneracy);
    }
};

struct Spectrum {
    SpinSystemSpec spec;
    std::vector<Level> levels;  // ordered by i = -n .. n

    const Level& level(int i) const {
        if (i < -spec.n || i > spec.n)
            throw std::domain_error("Spectrum: level index " + std::to_string(i) + " outside [-n, n]");
        return levels[static_cast<std::size_t>(i + spec.n)];
    }
};

namespace detail {

using u128 = unsigned __int128;

inline const std::array<u128, exact_degeneracy_max_n + 1>& factorial_table() {
    static const auto table = [] {
        std::array<u128, exact_degeneracy_max_n + 1> t{};
        t[0] = 1;
        for (int k = 1; k <= exact_degeneracy_max_n; ++k) t[k] = t[k - 1] * static_cast<u128>(k);
        return t;
    }();
    return table;
}

}  // namespace detail

// n! / (minus! zero! plus!), exact; every intermediate fits 128 bits for
// n <= 30 and the result fits 64 bits (bounded by 3^30)
inline std::uint64_t multinomial(const OccupationTriple& occ) {
    if (occ.minus < 0 || occ.zero < 0 || occ.plus < 0)
        throw std::domain_error("multinomial: negative occupation count");
    const int n = occ.total();
    if (n > exact_degeneracy_max_n)
        throw std::invalid_argument("multinomial: exact path limited to n <= " +
                                    std::to_string(exact_degeneracy_max_n));
    const auto& fact = detail::factorial_table();
    detail::u128 r = fact[n];
    r /= fact[occ.minus];
    r /= fact[occ.zero];
    r /= fact[occ.plus];
    return static_cast<std::uint64_t>(r);
}

inline double log_multinomial(const OccupationTriple& occ) {
    if (occ.minus < 0 || occ.zero < 0 || occ.plus < 0)
        throw std::domain_error("log_multinomial: negative occupation count");
    const double n = occ.total();
    return std::lgamma(n + 1.0) - std::lgamma(occ.minus + 1.0) - std::lgamma(occ.zero + 1.0) -
           std::lgamma(occ.plus + 1.0);
}

// all occupation triples of n spins with total energy i; (i, zero) pairs of
// the wrong parity do not occur in the sum and are skipped, not an error
inline std::vector<OccupationTriple> occupation_domain(int n, int i) {
    if (n < 1) throw std::domain_error("occupation_domain: n must be >= 1");
    if (i < -n || i > n)
        throw std::domain_error("occupation_domain: |i| > n with i = " + std::to_string(i));
    std::vector<OccupationTriple> out;
    for (int zero = 0; zero <= n; ++zero) {
        const int rest = n - zero;  // minus + plus
        if ((rest + i) % 2 != 0) continue;
        const int plus = (rest + i) / 2;
        const int minus = rest - plus;
        if (plus < 0 || minus < 0) continue;
        out.push_back({minus, zero, plus});
    }
    return out;
}

inline std::vector<OccupationTriple> occupation_domain(int n) {
    if (n < 1) throw std::domain_error("occupation_domain: n must be >= 1");
    std::vector<OccupationTriple> out;
    for (int i = -n; i <= n; ++i)
        for (const auto& occ : occupation_domain(n, i)) out.push_back(occ);
    return out;
}

// D(n, i): number of product states at energy i
inline Level degeneracy(int n, int i) {
    Level lv;
    lv.i = i;
    std::vector<double> terms;
    std::uint64_t exact = 0;
    // D(n,-i) = D(n,i) exactly; evaluating both wings on the |i| domain makes
    // the log route inherit the mirror symmetry bit for bit
    for (const auto& occ : occupation_domain(n, i < 0 ? -i : i)) {
        terms.push_back(log_multinomial(occ));
        if (n <= exact_degeneracy_max_n) exact += multinomial(occ);
    }
    lv.log_degeneracy = log_sum_exp(terms);
    if (n <= exact_degeneracy_max_n) lv.exact_degeneracy = exact;
    return lv;
}

inline Spectrum full_spectrum(int n) {
    Spectrum sp{SpinSystemSpec{n}, {}};
    sp.levels.reserve(static_cast<std::size_t>(2 * n + 1));
    for (int i = -n; i <= n; ++i) sp.levels.push_back(degeneracy(n, i));
    return sp;
}

// Sum_i D(n,i) f(i) over the levels selected by `include`, accumulated in log
// space with sign tracking so f may change sign across the spectrum.
template <class F, class Include>
double level_sum(const Spectrum& spectrum, F&& f, Include&& include) {
    SignedLogAccumulator acc;
    for (const Level& lv : spectrum.levels) {
        if (!include(lv.i)) continue;
        const double fe = static_cast<double>(f(static_cast<double>(lv.i)));
        if (!std::isfinite(fe))
            throw std::runtime_error("level_sum: f not finite at level i = " + std::to_string(lv.i));
        if (fe == 0.0) continue;
        acc.add(lv.log_degeneracy + std::log(std::abs(fe)), fe > 0.0 ? 1 : -1);
    }
    return acc.value();
}

template <class F>
double level_sum(const Spectrum& spectrum, F&& f) {
    return level_sum(spectrum, static_cast<F&&>(f), [](int) { return true; });
}

// Gaussian density of states sharing the exact spectral mean (0) and
// variance (2n/3), normalized to the full dimension 3^n
inline double log_gaussian_dos(const SpinSystemSpec& spec, double energy) {
    const double variance = 2.0 * spec.n / 3.0;
    return spec.log_dimension() - 0.5 * std::log(2.0 * pi * variance) - energy * energy / (2.0 * variance);
}

inline double gaussian_dos(const SpinSystemSpec& spec, double energy) {
    return std::exp(log_gaussian_dos(spec, energy));
}

struct BasisState {
    std::array<std::int8_t, enumerate_basis_max_n> m{};  // trits in {-1,0,1}; entries past n-1 unused
    int energy = 0;                                      // = sum of the first n trits
};

// all 3^n product states in lexicographic trit order (m = -1 < 0 < +1,
// last spin least significant)
inline std::vector<BasisState> enumerate_basis(int n) {
    if (n < 1) throw std::domain_error("enumerate_basis: n must be >= 1");
    if (n > enumerate_basis_max_n)
        throw std::invalid_argument("enumerate_basis: n = " + std::to_string(n) + " exceeds the 3^" +
                                    std::to_string(enumerate_basis_max_n) + " state cap");
    std::vector<BasisState> states;
    states.reserve(pow3(n));
    BasisState st;
    for (int j = 0; j < n; ++j) st.m[j] = -1;
    st.energy = -n;
    for (;;) {
        states.push_back(st);
        int j = n - 1;
        while (j >= 0 && st.m[j] == 1) {
            st.m[j] = -1;
            st.energy -= 2;
            --j;
        }
        if (j < 0) break;
        ++st.m[j];
        ++st.energy;
    }
    return states;
}

}  // namespace spinens
