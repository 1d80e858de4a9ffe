#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "spinens/feee.hpp"
#include "spinens/log_space.hpp"
#include "spinens/rdm.hpp"
#include "spinens/spectrum.hpp"

namespace spinens {

// full FEEE population vectors are materialized over 3^n states; capped here
inline constexpr int sample_feee_max_n = 8;

// Counter-based generator: the draw sequence is a pure function of
// (seed, sample index, stream), so parallel sampling is reproducible
// independent of scheduling. Core transform is splitmix64.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0)
        : state_(mix(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ index) ^ stream)) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // strictly inside (0, 1)
    double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    // standard exponential, mean 1
    double exponential() { return -std::log(uniform01()); }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

struct ActiveState {
    std::int8_t s = 0;        // first-spin (subsystem) state
    std::int32_t env = 0;     // environment index, lexicographic over spins 2..n
    std::int16_t energy = 0;  // = s + environment energy
};

// basis-index set of all product states with energy at or below the cutoff,
// factorized into (subsystem state, environment index)
struct ActiveSpace {
    int n = 0;
    int e_max = 0;
    std::vector<ActiveState> states;              // sorted by (env, s)
    std::array<std::uint64_t, 3> split_counts{};  // active states per subsystem state

    std::uint64_t count() const { return states.size(); }
};

inline ActiveSpace build_active_space(int n, int e_max) {
    if (n < 2 || n > enumerate_basis_max_n)
        throw std::invalid_argument("build_active_space: n must be in [2, " +
                                    std::to_string(enumerate_basis_max_n) + "], got " +
                                    std::to_string(n));
    if (e_max < -n)
        throw std::domain_error("build_active_space: cutoff " + std::to_string(e_max) +
                                " below the ground level leaves an empty active space");
    ActiveSpace space;
    space.n = n;
    space.e_max = e_max;
    const auto env_states = enumerate_basis(n - 1);
    for (std::int32_t e = 0; e < static_cast<std::int32_t>(env_states.size()); ++e) {
        for (int s = -1; s <= 1; ++s) {
            const int energy = s + env_states[static_cast<std::size_t>(e)].energy;
            if (energy > e_max) continue;
            space.states.push_back(
                {static_cast<std::int8_t>(s), e, static_cast<std::int16_t>(energy)});
            ++space.split_counts[static_cast<std::size_t>(s + 1)];
        }
    }
    return space;
}

// one population vector uniform on the simplex: normalized iid exponentials
inline std::vector<double> sample_rpse(const ActiveSpace& space, std::uint64_t seed,
                                       std::uint64_t index) {
    RngStream rng(seed, index);
    std::vector<double> p(space.count());
    double sum = 0.0;
    for (double& v : p) {
        v = rng.exponential();
        sum += v;
    }
    const double inv = 1.0 / sum;
    for (double& v : p) v *= inv;
    return p;
}

// factorized approximation of the same ensemble: iid exponentials with mean
// 1/N, not normalized; kept alongside the simplex sampler because several
// closed-form mean/variance laws hold exactly only for this distribution
inline std::vector<double> sample_rpse_factorized(const ActiveSpace& space, std::uint64_t seed,
                                                  std::uint64_t index) {
    RngStream rng(seed, index);
    const double mean = 1.0 / static_cast<double>(space.count());
    std::vector<double> p(space.count());
    for (double& v : p) v = rng.exponential() * mean;
    return p;
}

// one FEEE population vector over the full 3^n basis in active-space order:
// the ground state is pinned at its mean, every other state is exponential
// with its level's per-state mean; not renormalized by default because the
// ensemble's closed-form averages describe the raw factorized draw
inline std::vector<double> sample_feee(const FeeeSpec& spec, const ActiveSpace& space,
                                       std::uint64_t seed, std::uint64_t index,
                                       bool renormalize = false) {
    if (spec.n > sample_feee_max_n)
        throw std::invalid_argument("sample_feee: materializing 3^n populations capped at n = " +
                                    std::to_string(sample_feee_max_n));
    if (space.n != spec.n || space.count() != pow3(spec.n))
        throw std::invalid_argument("sample_feee: requires the full-spectrum active space");
    const PopulationMeans means = feee_population_means(spec);
    std::vector<double> per_state(static_cast<std::size_t>(2 * spec.n + 1), 0.0);
    for (const LevelMean& lm : means.level_means)
        per_state[static_cast<std::size_t>(lm.i + spec.n)] = lm.per_state_mean;

    RngStream rng(seed, index);
    std::vector<double> p(space.count());
    for (std::size_t k = 0; k < p.size(); ++k) {
        const ActiveState& st = space.states[k];
        p[k] = st.energy == -spec.n
                   ? means.ground_mean
                   : rng.exponential() * per_state[static_cast<std::size_t>(st.energy + spec.n)];
    }
    if (renormalize) {
        double sum = 0.0;
        for (double v : p) sum += v;
        for (double& v : p) v /= sum;
    }
    return p;
}

inline double pure_state_entropy(std::span<const double> p) {
    double s = 0.0;
    for (double v : p) {
        if (v < 0.0) throw std::domain_error("pure_state_entropy: negative population");
        s -= xlogx(v);
    }
    return s;
}

inline double expectation_energy(std::span<const double> p, const ActiveSpace& space) {
    if (p.size() != space.count())
        throw std::invalid_argument("expectation_energy: population vector size " +
                                    std::to_string(p.size()) + " does not match the active space");
    double e = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) e += p[k] * space.states[k].energy;
    return e;
}

// diagonal of the one-spin reduced density matrix: populations grouped by the
// subsystem state; trace equals the population sum
inline RdmDiagonal reduced_dm(std::span<const double> p, const ActiveSpace& space) {
    if (p.size() != space.count())
        throw std::invalid_argument("reduced_dm: population vector size " + std::to_string(p.size()) +
                                    " does not match the active space");
    double mu[3] = {0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < p.size(); ++k) mu[space.states[k].s + 1] += p[k];
    return {mu[0], mu[1], mu[2]};
}

// Hermitian single-spin observable in the m = -1, 0, +1 basis
class SubsystemObservable {
public:
    using Matrix = std::array<std::array<std::complex<double>, 3>, 3>;

    explicit SubsystemObservable(const Matrix& a) : a_(a) {
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                if (std::abs(a_[r][c] - std::conj(a_[c][r])) > 1e-12)
                    throw std::invalid_argument("SubsystemObservable: matrix is not Hermitian");
    }

    std::complex<double> element(int s_row, int s_col) const {
        return a_[static_cast<std::size_t>(s_row + 1)][static_cast<std::size_t>(s_col + 1)];
    }

    // diagonal of A A^dagger
    double row_norm_sq(int s) const {
        double r = 0.0;
        for (int c = 0; c < 3; ++c) r += std::norm(a_[static_cast<std::size_t>(s + 1)][c]);
        return r;
    }

    static SubsystemObservable spin_x() {
        Matrix a{};
        const double r = 1.0 / std::sqrt(2.0);
        a[0][1] = a[1][0] = a[1][2] = a[2][1] = r;
        return SubsystemObservable(a);
    }

    static SubsystemObservable spin_y() {
        Matrix a{};
        const std::complex<double> ir(0.0, 1.0 / std::sqrt(2.0));
        a[0][1] = ir;
        a[1][0] = -ir;
        a[1][2] = ir;
        a[2][1] = -ir;
        return SubsystemObservable(a);
    }

    static SubsystemObservable spin_z() {
        Matrix a{};
        a[0][0] = -1.0;
        a[2][2] = 1.0;
        return SubsystemObservable(a);
    }

private:
    Matrix a_;
};

// temporal fluctuation amplitude of a subsystem observable for one pure
// state: sum over distinct state pairs of |A_kk'|^2 P_k P_k'. A subsystem
// operator only couples states sharing an environment index, and those are
// contiguous in the active space, so the cost is linear in its dimension.
inline double fluctuation_amplitude(std::span<const double> p, const SubsystemObservable& obs,
                                    const ActiveSpace& space) {
    if (p.size() != space.count())
        throw std::invalid_argument("fluctuation_amplitude: population vector size " +
                                    std::to_string(p.size()) + " does not match the active space");
    double total = 0.0;
    std::size_t k = 0;
    while (k < p.size()) {
        const std::int32_t env = space.states[k].env;
        double pop[3] = {0.0, 0.0, 0.0};
        std::size_t end = k;
        while (end < p.size() && space.states[end].env == env) {
            pop[space.states[end].s + 1] = p[end];
            ++end;
        }
        for (int s = -1; s <= 1; ++s)
            for (int s2 = -1; s2 <= 1; ++s2)
                if (s != s2) total += std::norm(obs.element(s, s2)) * pop[s + 1] * pop[s2 + 1];
        k = end;
    }
    return total;
}

// ensemble upper bound on the mean fluctuation amplitude:
// Tr{A A^dagger rdm} / N_active
inline double fluctuation_bound(const SubsystemObservable& obs, const RdmDiagonal& rdm,
                                double n_active) {
    if (n_active < 1.0)
        throw std::domain_error("fluctuation_bound: active dimension must be >= 1");
    double tr = 0.0;
    for (int s = -1; s <= 1; ++s) tr += obs.row_norm_sq(s) * rdm.at(s);
    return tr / n_active;
}

struct SampleStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double variance = 0.0;   // unbiased (count - 1 divisor)
    double std_error = 0.0;  // sqrt(variance / count)
};

namespace detail {

// fn(i) for i in [0, count) over contiguous per-worker ranges; per-index work
// plus indexed output keeps results independent of the thread count
template <class Fn>
void run_indexed(std::uint64_t count, int threads, Fn&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    const std::uint64_t workers = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads),
                                                          count == 0 ? 1 : count);
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::mutex error_mutex;
    std::exception_ptr error;
    const std::uint64_t chunk = (count + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, &error_mutex, &error, begin, end] {
            try {
                for (std::uint64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

inline SampleStats summarize(std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("summarize: need at least two samples");
    SampleStats st;
    st.count = values.size();
    st.mean = pairwise_sum(values) / static_cast<double>(st.count);
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const double d = values[i] - st.mean;
        sq[i] = d * d;
    }
    st.variance = pairwise_sum(sq) / static_cast<double>(st.count - 1);
    st.std_error = std::sqrt(st.variance / static_cast<double>(st.count));
    return st;
}

// mean/variance/std error of a statistic over `count` independent samples;
// deterministic for fixed (seed, count) whatever the thread count
template <class Sampler, class Statistic>
SampleStats ensemble_estimate(Sampler&& sampler, Statistic&& statistic, std::uint64_t count,
                              std::uint64_t seed, int threads = 0) {
    if (count < 2) throw std::invalid_argument("ensemble_estimate: need at least two samples");
    std::vector<double> values(count);
    detail::run_indexed(count, threads,
                        [&](std::uint64_t i) { values[i] = statistic(sampler(seed, i)); });
    return summarize(values);
}

// several statistics over one shared sample stream
template <class Sampler>
std::vector<SampleStats> ensemble_estimate_multi(
    Sampler&& sampler,
    const std::vector<std::function<double(const std::vector<double>&)>>& statistics,
    std::uint64_t count, std::uint64_t seed, int threads = 0) {
    if (count < 2)
        throw std::invalid_argument("ensemble_estimate_multi: need at least two samples");
    const std::size_t ns = statistics.size();
    std::vector<double> values(count * ns);
    detail::run_indexed(count, threads, [&](std::uint64_t i) {
        const std::vector<double> sample = sampler(seed, i);
        for (std::size_t j = 0; j < ns; ++j) values[i + j * count] = statistics[j](sample);
    });
    std::vector<SampleStats> out;
    out.reserve(ns);
    const std::span<const double> all(values);
    for (std::size_t j = 0; j < ns; ++j) out.push_back(summarize(all.subspan(j * count, count)));
    return out;
}

}  // namespace spinens
