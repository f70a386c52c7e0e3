#pragma once

// Phase extraction from Kraus trajectories: per-sample polar decomposition,
// relative phases alpha_mu = arg tr[M_mu(tau) rho(0)], discrete parallel
// transport of the unitary polar factors, and the composed pipeline.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "krauskit/density.hpp"
#include "krauskit/kraus.hpp"
#include "krauskit/linalg.hpp"
#include "krauskit/matrix.hpp"
#include "krauskit/trajectory.hpp"

namespace krauskit {

struct PolarFactors {
    ComplexMatrix h;  // Hermitian PSD
    ComplexMatrix u;  // unitary, h*u recomposes the operator
};

struct PolarTrajectory {
    std::vector<double> times;
    std::size_t dim = 0;
    std::vector<std::vector<PolarFactors>> samples;  // samples[k][mu]
    bool aligned = false;
};

struct PhaseEntry {
    double alpha = 0.0;      // radians in (-pi, pi]
    double magnitude = 0.0;  // |tr[M_mu(tau) rho(0)]|
    bool defined = false;    // false when the trace magnitude is below 1e-12
};

struct PhaseReport {
    std::vector<PhaseEntry> phases;                // per mu
    std::vector<double> transport_residual_max;    // per mu; empty if not computed
    bool aligned = false;
};

struct TransportResiduals {
    // residuals[mu][k][i] = |<psi_i(0)| u_mu(t_k)^dag (u_mu(t_{k+1}) - u_mu(t_k))
    //                        / dt_k |psi_i(0)>|
    std::vector<std::vector<std::vector<double>>> residuals;
    std::vector<double> max_per_mu;
};

namespace detail {

inline double normalize_angle(double a) {
    constexpr double pi = 3.14159265358979323846;
    a = std::remainder(a, 2.0 * pi);
    if (a <= -pi) a = pi;
    return a;
}

inline std::vector<cx> matvec(const ComplexMatrix& m, const std::vector<cx>& x) {
    std::vector<cx> y(m.rows(), cx{0.0, 0.0});
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) y[r] += m(r, c) * x[c];
    return y;
}

}  // namespace detail

inline PolarTrajectory polar_trajectory(const KrausTrajectory& kt, const Tolerances& tol = {}) {
    if (kt.sets.empty())
        throw Error(errc::bad_params, "polar_trajectory: empty trajectory");
    PolarTrajectory out;
    out.times = kt.times;
    out.dim = kt.sets.front().dim;
    out.samples.reserve(kt.sets.size());
    for (const KrausSet& ks : kt.sets) {
        std::vector<PolarFactors> row;
        row.reserve(ks.ops.size());
        for (const ComplexMatrix& m : ks.ops) {
            PolarResult pr = polar_decompose(m, tol);
            row.push_back(PolarFactors{std::move(pr.h), std::move(pr.u)});
        }
        out.samples.push_back(std::move(row));
    }
    return out;
}

// alpha_mu = arg tr[M_mu(tau) rho(0)] from the final-time set. Operators with
// trace magnitude below 1e-12 carry no meaningful phase and are flagged
// instead of reported as zero.
inline PhaseReport relative_phases(const KrausTrajectory& kt, const DensityMatrix& rho0) {
    if (kt.sets.empty())
        throw Error(errc::bad_params, "relative_phases: empty trajectory");
    const KrausSet& final_set = kt.sets.back();
    if (final_set.dim != rho0.dim)
        throw Error(errc::dimension_mismatch, "relative_phases: dimension mismatch");
    PhaseReport rep;
    rep.phases.reserve(final_set.ops.size());
    for (const ComplexMatrix& m : final_set.ops) {
        const cx t = (m * rho0.mat).trace();
        PhaseEntry e;
        e.magnitude = std::abs(t);
        e.defined = e.magnitude >= 1e-12;
        e.alpha = e.defined ? detail::normalize_angle(std::arg(t)) : 0.0;
        rep.phases.push_back(e);
    }
    return rep;
}

inline TransportResiduals transport_residuals(const PolarTrajectory& pt,
                                              const SpectralDecomposition& sd0) {
    if (pt.times.size() < 2)
        throw Error(errc::too_few_samples, "transport_residuals needs >= 2 samples");
    const std::size_t n = pt.dim;
    const std::size_t mu_count = pt.samples.front().size();
    TransportResiduals out;
    out.residuals.assign(mu_count, {});
    out.max_per_mu.assign(mu_count, 0.0);
    for (std::size_t mu = 0; mu < mu_count; ++mu) {
        out.residuals[mu].reserve(pt.times.size() - 1);
        for (std::size_t k = 0; k + 1 < pt.times.size(); ++k) {
            const double dt = pt.times[k + 1] - pt.times[k];
            const ComplexMatrix& uk = pt.samples[k][mu].u;
            const ComplexMatrix diff = pt.samples[k + 1][mu].u - uk;
            std::vector<double> per_i(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto psi = sd0.basis.column(i);
                const auto x = detail::matvec(diff, psi);
                const auto y = detail::matvec(uk, psi);
                per_i[i] = std::abs(detail::dot(y, x)) / dt;
                out.max_per_mu[mu] = std::max(out.max_per_mu[mu], per_i[i]);
            }
            out.residuals[mu].push_back(std::move(per_i));
        }
    }
    return out;
}

// Discrete parallel transport: sequentially right-multiply each u_mu(t_{k+1})
// by the phase unitary, diagonal in the rho(0) eigenbasis, that makes every
// diagonal step-overlap <psi_i(0)| u_mu(t_k)^dag u_mu(t_{k+1}) |psi_i(0)>
// real non-negative.
inline PolarTrajectory align_transport(const PolarTrajectory& pt,
                                       const SpectralDecomposition& sd0) {
    PolarTrajectory out = pt;
    const std::size_t n = pt.dim;
    const std::size_t mu_count = pt.samples.empty() ? 0 : pt.samples.front().size();
    for (std::size_t mu = 0; mu < mu_count; ++mu) {
        for (std::size_t k = 0; k + 1 < out.times.size(); ++k) {
            const ComplexMatrix& prev = out.samples[k][mu].u;      // already aligned
            const ComplexMatrix& cur = out.samples[k + 1][mu].u;   // raw
            ComplexMatrix gauge_diag(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto psi = sd0.basis.column(i);
                const cx d = detail::dot(detail::matvec(prev, psi), detail::matvec(cur, psi));
                const double mag = std::abs(d);
                if (mag < 1e-12)
                    throw Error(errc::degenerate_overlap,
                                "align_transport: vanishing step overlap, grid too coarse");
                gauge_diag(i, i) = std::conj(d) / mag;  // e^{i theta_i}
            }
            const ComplexMatrix g = sd0.basis * gauge_diag * sd0.basis.adjoint();
            out.samples[k + 1][mu].u = cur * g;
        }
    }
    out.aligned = true;
    return out;
}

// Recompose operators h_mu u_mu per sample. Aligned sets are for phase
// extraction only; joint completeness is not implied.
inline KrausTrajectory recompose(const PolarTrajectory& pt) {
    KrausTrajectory out;
    out.times = pt.times;
    out.sets.reserve(pt.samples.size());
    for (const auto& row : pt.samples) {
        KrausSet ks;
        ks.dim = pt.dim;
        ks.label = pt.aligned ? "aligned" : "recomposed";
        ks.ops.reserve(row.size());
        for (const PolarFactors& f : row) ks.ops.push_back(f.h * f.u);
        out.sets.push_back(std::move(ks));
    }
    return out;
}

// Full pipeline: spectral trajectory -> Kraus trajectory -> polar factors ->
// transport alignment -> relative phases of the aligned final operators.
inline PhaseReport geometric_phase(const DensityTrajectory& traj, const Tolerances& tol = {}) {
    const SpectralTrajectory straj = spectral_trajectory(traj, tol);
    const KrausTrajectory kt = kraus_trajectory(straj, tol);
    const PolarTrajectory pt = polar_trajectory(kt, tol);
    const SpectralDecomposition sd0{straj.populations.front(), straj.frames.front()};
    const PolarTrajectory aligned = align_transport(pt, sd0);
    const TransportResiduals res = transport_residuals(aligned, sd0);
    PhaseReport rep = relative_phases(recompose(aligned), traj.states.front());
    rep.aligned = true;
    rep.transport_residual_max = res.max_per_mu;
    return rep;
}

}  // namespace krauskit
