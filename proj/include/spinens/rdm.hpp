#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinens/log_space.hpp"

namespace spinens {

// diagonal of a single spin's reduced density matrix in the m = -1, 0, +1 basis
struct RdmDiagonal {
    double minus = 0.0;
    double zero = 0.0;
    double plus = 0.0;

    double trace() const { return minus + zero + plus; }

    double at(int s) const {
        switch (s) {
            case -1: return minus;
            case 0: return zero;
            case 1: return plus;
        }
        throw std::domain_error("RdmDiagonal: spin state must be -1, 0 or +1");
    }
};

// deviation from the canonical exponential form: plus*minus/zero^2 - 1,
// identically zero for any state whose weights are geometric in the energy
inline double r_parameter(const RdmDiagonal& rdm) {
    if (rdm.zero <= 0.0)
        throw std::domain_error("r_parameter: zero-state weight " + std::to_string(rdm.zero) +
                                " vanishes");
    return rdm.plus * rdm.minus / (rdm.zero * rdm.zero) - 1.0;
}

// single-spin canonical state exp(-s beta)/Q; max-shifted so any finite beta
// is safe from overflow
inline RdmDiagonal canonical_rdm(double beta) {
    if (!std::isfinite(beta))
        throw std::domain_error("canonical_rdm: beta must be finite");
    const double shift = std::abs(beta);
    const double wm = std::exp(beta - shift);
    const double w0 = std::exp(-shift);
    const double wp = std::exp(-beta - shift);
    const double q = wm + w0 + wp;
    return {wm / q, w0 / q, wp / q};
}

inline double rdm_entropy(const RdmDiagonal& rdm) {
    return -(xlogx(rdm.minus) + xlogx(rdm.zero) + xlogx(rdm.plus));
}

}  // namespace spinens
