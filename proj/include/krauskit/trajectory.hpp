#pragma once

// Time-sampled density trajectories, gauge-continuous spectral decomposition
// along time, the per-sample Kraus construction M_mu(t) = U(t) M'_mu(t)
// U(0)^dagger, and closed-form fixture generators.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "krauskit/density.hpp"
#include "krauskit/kraus.hpp"
#include "krauskit/linalg.hpp"
#include "krauskit/matrix.hpp"

namespace krauskit {

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

struct SpectralTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> populations;  // populations[k][i] tracks branch i
    std::vector<ComplexMatrix> frames;             // unitary frame per sample
};

struct KrausTrajectory {
    std::vector<double> times;
    std::vector<KrausSet> sets;
};

// How eigenframes are fixed along the time grid.
//   matched:         branches matched to the previous sample by maximal
//                    overlap, phases fixed so consecutive overlaps are real
//                    non-negative (the default; needed for phase extraction).
//   static_per_time: every sample keeps the plain descending-order
//                    decomposition; valid pointwise but phases may jump.
enum class EigenGauge { matched, static_per_time };

inline DensityTrajectory make_trajectory(std::vector<double> times,
                                         std::vector<ComplexMatrix> states,
                                         const Tolerances& tol = {}) {
    if (times.size() != states.size())
        throw Error(errc::bad_params, "trajectory: times/states length mismatch");
    if (times.size() < 2)
        throw Error(errc::too_few_samples, "trajectory needs at least two samples");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw Error(errc::bad_params, "trajectory times must be strictly increasing");
    DensityTrajectory traj;
    traj.times = std::move(times);
    traj.states.reserve(states.size());
    for (const ComplexMatrix& m : states) {
        DensityMatrix rho = validate_density(m, tol);
        if (!traj.states.empty() && rho.dim != traj.states.front().dim)
            throw Error(errc::dimension_mismatch, "trajectory states have mixed dimensions");
        traj.states.push_back(std::move(rho));
    }
    return traj;
}

inline SpectralTrajectory spectral_trajectory(const DensityTrajectory& traj,
                                              const Tolerances& tol = {},
                                              EigenGauge gauge = EigenGauge::matched) {
    const std::size_t n = traj.states.front().dim;
    SpectralTrajectory out;
    out.times = traj.times;
    out.populations.reserve(traj.states.size());
    out.frames.reserve(traj.states.size());

    SpectralDecomposition sd0 = spectral_decompose(traj.states.front(), tol);
    out.populations.push_back(sd0.eigenvalues);
    out.frames.push_back(sd0.basis);

    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        SpectralDecomposition sd = spectral_decompose(traj.states[k], tol);
        if (gauge == EigenGauge::static_per_time) {
            out.populations.push_back(std::move(sd.eigenvalues));
            out.frames.push_back(std::move(sd.basis));
            continue;
        }

        // Greedy branch matching on |<psi_i(t_{k-1})|psi_j(t_k)>|.
        const ComplexMatrix overlap = out.frames.back().adjoint() * sd.basis;
        std::vector<bool> row_used(n, false), col_used(n, false);
        std::vector<std::size_t> col_of_row(n, 0);
        for (std::size_t pick = 0; pick < n; ++pick) {
            double best = -1.0, second = -1.0;
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (row_used[i]) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    if (col_used[j]) continue;
                    const double a = std::abs(overlap(i, j));
                    if (a > best) {
                        second = best;
                        best = a;
                        bi = i;
                        bj = j;
                    } else if (a > second) {
                        second = a;
                    }
                }
            }
            if (best < 1.0 / std::sqrt(2.0) && second >= 0.0 && best - second < tol.rank_tol)
                throw Error(errc::ambiguous_matching,
                            "spectral_trajectory: eigenbranch crossing is unresolvable "
                            "on this grid");
            row_used[bi] = true;
            col_used[bj] = true;
            col_of_row[bi] = bj;
        }

        std::vector<double> pops(n);
        ComplexMatrix frame(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = col_of_row[i];
            pops[i] = sd.eigenvalues[j];
            cx d = overlap(i, j);
            const double mag = std::abs(d);
            const cx phase = mag > 0.0 ? d / mag : cx{1.0, 0.0};
            const cx inv = std::conj(phase);
            for (std::size_t r = 0; r < n; ++r) frame(r, i) = sd.basis(r, j) * inv;
        }
        out.populations.push_back(std::move(pops));
        out.frames.push_back(std::move(frame));
    }
    return out;
}

// Per-sample Kraus sets M_mu(t_k) = U(t_k) M'_mu(p(t_k)) U(0)^dagger.
inline KrausTrajectory kraus_trajectory(const SpectralTrajectory& straj,
                                        const Tolerances& tol = {}) {
    KrausTrajectory out;
    out.times = straj.times;
    out.sets.reserve(straj.times.size());
    const ComplexMatrix u0_dag = straj.frames.front().adjoint();
    for (std::size_t k = 0; k < straj.times.size(); ++k) {
        KrausSet ks = build_shift_family(straj.populations[k], tol);
        for (ComplexMatrix& m : ks.ops) m = straj.frames[k] * m * u0_dag;
        ks.label = "trajectory";
        out.sets.push_back(std::move(ks));
    }
    return out;
}

namespace detail {

// steps counts time intervals; the grid has steps + 1 samples with the
// endpoint pinned exactly to tau.
inline std::vector<double> time_grid(double tau, std::size_t steps) {
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k < steps; ++k)
        t[k] = tau * static_cast<double>(k) / static_cast<double>(steps);
    t[steps] = tau;
    return t;
}

inline void require_grid_params(double tau, std::size_t steps) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw Error(errc::bad_params, "tau must be positive and finite");
    if (steps < 2)
        throw Error(errc::bad_params, "steps must be at least 2");
}

}  // namespace detail

// Qubit with Bloch vector at polar angle theta precessing uniformly about the
// z-axis: rho(t) = V(t) diag(p, 1-p) V(t)^dagger. Closed loop when
// omega * tau = 2 pi.
inline DensityTrajectory gen_unitary_precession(double theta, double omega, double tau,
                                                std::size_t steps, double purity,
                                                const Tolerances& tol = {}) {
    detail::require_grid_params(tau, steps);
    if (!(purity >= 0.5) || !(purity <= 1.0))
        throw Error(errc::bad_params, "purity must lie in [1/2, 1]");
    if (!std::isfinite(theta) || !std::isfinite(omega))
        throw Error(errc::bad_params, "theta/omega must be finite");

    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    std::vector<double> times = detail::time_grid(tau, steps);
    std::vector<ComplexMatrix> states;
    states.reserve(times.size());
    for (double t : times) {
        const double phi = omega * t;
        const cx e{std::cos(phi), -std::sin(phi)};  // e^{-i phi}
        ComplexMatrix rho(2, 2);
        rho(0, 0) = cx{purity * c * c + (1.0 - purity) * s * s, 0.0};
        rho(1, 1) = cx{purity * s * s + (1.0 - purity) * c * c, 0.0};
        rho(0, 1) = (2.0 * purity - 1.0) * c * s * e;
        rho(1, 0) = std::conj(rho(0, 1));
        states.push_back(std::move(rho));
    }
    return make_trajectory(std::move(times), std::move(states), tol);
}

// Pure dephasing of |+><+|: off-diagonals decay as e^{-gamma t}.
inline DensityTrajectory gen_dephasing(double gamma, double tau, std::size_t steps,
                                       const Tolerances& tol = {}) {
    detail::require_grid_params(tau, steps);
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw Error(errc::bad_params, "gamma must be non-negative");
    std::vector<double> times = detail::time_grid(tau, steps);
    std::vector<ComplexMatrix> states;
    states.reserve(times.size());
    for (double t : times) {
        const double off = 0.5 * std::exp(-gamma * t);
        ComplexMatrix rho(2, 2);
        rho(0, 0) = rho(1, 1) = cx{0.5, 0.0};
        rho(0, 1) = rho(1, 0) = cx{off, 0.0};
        states.push_back(std::move(rho));
    }
    return make_trajectory(std::move(times), std::move(states), tol);
}

// Exponential shrink towards the maximally mixed state:
// rho(t) = e^{-lambda t} rho0 + (1 - e^{-lambda t}) I/N.
inline DensityTrajectory gen_depolarizing(double lambda_rate, const DensityMatrix& rho0,
                                          double tau, std::size_t steps,
                                          const Tolerances& tol = {}) {
    detail::require_grid_params(tau, steps);
    if (!(lambda_rate >= 0.0) || !std::isfinite(lambda_rate))
        throw Error(errc::bad_params, "lambda must be non-negative");
    const std::size_t n = rho0.dim;
    const ComplexMatrix mixed = ComplexMatrix::identity(n) * (1.0 / static_cast<double>(n));
    std::vector<double> times = detail::time_grid(tau, steps);
    std::vector<ComplexMatrix> states;
    states.reserve(times.size());
    for (double t : times) {
        const double w = std::exp(-lambda_rate * t);
        states.push_back(rho0.mat * w + mixed * (1.0 - w));
    }
    return make_trajectory(std::move(times), std::move(states), tol);
}

}  // namespace krauskit
