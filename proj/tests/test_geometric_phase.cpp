#include <catch2/catch_amalgamated.hpp>

#include "krauskit/geometric_phase.hpp"
#include "test_support.hpp"

using namespace krauskit;
using namespace testsupport;

static KrausTrajectory identity_kraus_trajectory(std::size_t samples) {
    KrausTrajectory kt;
    for (std::size_t k = 0; k < samples; ++k) {
        kt.times.push_back(static_cast<double>(k));
        KrausSet ks;
        ks.dim = 2;
        ks.ops.push_back(ComplexMatrix::identity(2));
        kt.sets.push_back(ks);
    }
    return kt;
}

static PolarTrajectory phase_drift_polar(double omega, std::size_t samples, double dt) {
    PolarTrajectory pt;
    pt.dim = 2;
    for (std::size_t k = 0; k < samples; ++k) {
        pt.times.push_back(dt * static_cast<double>(k));
        PolarFactors f{ComplexMatrix::identity(2),
                       ComplexMatrix::identity(2) * std::polar(1.0, omega * pt.times[k])};
        pt.samples.push_back({f});
    }
    return pt;
}

TEST_CASE("polar_trajectory: identity sets") {
    const PolarTrajectory pt = polar_trajectory(identity_kraus_trajectory(3));
    for (const auto& row : pt.samples) {
        REQUIRE(frobenius_distance(row[0].h, ComplexMatrix::identity(2)) < 1e-14);
        REQUIRE(frobenius_distance(row[0].u, ComplexMatrix::identity(2)) < 1e-14);
    }
}

TEST_CASE("polar_trajectory: factor contract along a dephasing path") {
    const DensityTrajectory traj = gen_dephasing(1.0, 2.0, 60);
    const KrausTrajectory kt = kraus_trajectory(spectral_trajectory(traj));
    const PolarTrajectory pt = polar_trajectory(kt);
    for (std::size_t k = 0; k < kt.times.size(); ++k)
        for (std::size_t mu = 0; mu < 2; ++mu) {
            const PolarFactors& f = pt.samples[k][mu];
            REQUIRE(frobenius_distance(f.h * f.u, kt.sets[k].ops[mu]) <= 1e-10);
            REQUIRE(unitarity_defect(f.u) <= 1e-10);
            REQUIRE(hermitian_eig(f.h).eigenvalues.back() >= -1e-10);
        }
}

TEST_CASE("polar_trajectory: unitary evolution keeps the factor spectrum") {
    // Full-rank state under unitary evolution: h_mu(t) = U(t) diag(sqrt p) U(t)^dag,
    // so the spectrum of h is constant while u evolves.
    const DensityTrajectory traj = gen_unitary_precession(1.1, 2.0 * kPi, 1.0, 80, 0.8);
    const SpectralTrajectory straj = spectral_trajectory(traj);
    const KrausTrajectory kt = kraus_trajectory(straj);
    const PolarTrajectory pt = polar_trajectory(kt);
    for (std::size_t k = 0; k < kt.times.size(); k += 16) {
        ComplexMatrix sq(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            sq(i, i) = cx{std::sqrt(straj.populations[k][i]), 0.0};
        const ComplexMatrix expect = straj.frames[k] * sq * straj.frames[k].adjoint();
        for (std::size_t mu = 0; mu < 2; ++mu)
            REQUIRE(frobenius_distance(pt.samples[k][mu].h, expect) <= 1e-10);
    }
    REQUIRE(frobenius_distance(pt.samples[40][0].u, pt.samples[0][0].u) > 0.1);
}

TEST_CASE("polar_trajectory: rank-1 operators project onto the moving state") {
    const DensityTrajectory traj = gen_unitary_precession(1.3, 2.0 * kPi, 1.0, 60, 1.0);
    const SpectralTrajectory straj = spectral_trajectory(traj);
    const KrausTrajectory kt = kraus_trajectory(straj);
    const PolarTrajectory pt = polar_trajectory(kt);
    for (std::size_t k = 0; k < straj.times.size(); k += 15) {
        ComplexMatrix proj(2, 2);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c)
                proj(r, c) = straj.frames[k](r, 0) * std::conj(straj.frames[k](c, 0));
        // O(sqrt(eps)) spectral leakage of the numerically pure state bounds
        // the projector distance; the factor contract itself is tight.
        REQUIRE(frobenius_distance(pt.samples[k][0].h, proj) <= 1e-8);
        REQUIRE(frobenius_distance(pt.samples[k][0].h * pt.samples[k][0].u,
                                   kt.sets[k].ops[0]) <= 1e-10);
    }
}

TEST_CASE("relative_phases: constant mixed trajectory") {
    auto rng = make_rng(601);
    const DensityMatrix rho = random_density(3, rng);
    std::vector<ComplexMatrix> states{rho.mat, rho.mat, rho.mat};
    const DensityTrajectory traj = make_trajectory({0.0, 0.5, 1.0}, states);
    const KrausTrajectory kt = kraus_trajectory(spectral_trajectory(traj));
    const PhaseReport rep = relative_phases(kt, traj.states.front());
    // tr[M_0 rho(0)] = sum_i p_i^{3/2} > 0, so alpha_0 = 0.
    const SpectralDecomposition sd = spectral_decompose(rho);
    double expect_mag = 0.0;
    for (double p : sd.eigenvalues) expect_mag += std::pow(p, 1.5);
    REQUIRE(rep.phases[0].defined);
    REQUIRE(rep.phases[0].alpha == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(rep.phases[0].magnitude == Catch::Approx(expect_mag).margin(1e-10));
    REQUIRE_FALSE(rep.aligned);
}

TEST_CASE("relative_phases: pure-state overlap phase and undefined shifts") {
    // Pole-to-pole loop: rho(0) and rho(tau) are exactly diagonal, so the
    // zero rows of the shift family survive in exact arithmetic.
    std::vector<double> times;
    std::vector<ComplexMatrix> states;
    const std::size_t samples = 121;
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(samples - 1);
        times.push_back(t);
        const std::vector<cx> psi{cx{std::cos(kPi * t), 0.0},
                                  std::polar(std::sin(kPi * t), 1.3 * t)};
        ComplexMatrix m(2, 2);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) m(r, c) = psi[r] * std::conj(psi[c]);
        states.push_back(std::move(m));
    }
    const DensityTrajectory traj = make_trajectory(times, states);
    const SpectralTrajectory straj = spectral_trajectory(traj);
    const KrausTrajectory kt = kraus_trajectory(straj);
    const PhaseReport rep = relative_phases(kt, traj.states.front());
    // alpha_0 = arg <psi(0)|psi(tau)> in the matched gauge.
    cx overlap{0.0, 0.0};
    for (std::size_t r = 0; r < 2; ++r)
        overlap += std::conj(straj.frames.front()(r, 0)) * straj.frames.back()(r, 0);
    REQUIRE(rep.phases[0].defined);
    REQUIRE(angdist(rep.phases[0].alpha, std::arg(overlap)) < 1e-10);
    // Shift operators see the orthogonal branch of the pure state: trace 0.
    REQUIRE_FALSE(rep.phases[1].defined);
    REQUIRE(rep.phases[1].magnitude < 1e-12);
}

TEST_CASE("transport_residuals: constant and drifting factors") {
    const PolarTrajectory constant = polar_trajectory(identity_kraus_trajectory(4));
    SpectralDecomposition sd0{{0.5, 0.5}, ComplexMatrix::identity(2)};
    const TransportResiduals zero = transport_residuals(constant, sd0);
    REQUIRE(zero.max_per_mu[0] == 0.0);

    const double omega = 0.7;
    const PolarTrajectory drift = phase_drift_polar(omega, 30, 0.01);
    const TransportResiduals res = transport_residuals(drift, sd0);
    for (const auto& step : res.residuals[0])
        for (double r : step) REQUIRE(r == Catch::Approx(omega).epsilon(1e-4));
}

TEST_CASE("align_transport: aligned input is a fixed point") {
    const PolarTrajectory constant = polar_trajectory(identity_kraus_trajectory(4));
    SpectralDecomposition sd0{{0.5, 0.5}, ComplexMatrix::identity(2)};
    const PolarTrajectory aligned = align_transport(constant, sd0);
    for (std::size_t k = 0; k < 4; ++k)
        REQUIRE(frobenius_distance(aligned.samples[k][0].u, constant.samples[k][0].u) <
                1e-14);
    REQUIRE(aligned.aligned);
}

TEST_CASE("align_transport: strips a global phase drift") {
    SpectralDecomposition sd0{{0.5, 0.5}, ComplexMatrix::identity(2)};
    const PolarTrajectory drift = phase_drift_polar(0.9, 25, 0.02);
    const PolarTrajectory aligned = align_transport(drift, sd0);
    for (std::size_t k = 1; k < 25; ++k)
        REQUIRE(frobenius_distance(aligned.samples[k][0].u, aligned.samples[0][0].u) <=
                1e-12);
    const TransportResiduals res = transport_residuals(aligned, sd0);
    REQUIRE(res.max_per_mu[0] <= 1e-10);
}

TEST_CASE("align_transport: degenerate step overlap is an error") {
    PolarTrajectory pt;
    pt.dim = 2;
    pt.times = {0.0, 1.0};
    ComplexMatrix x(2, 2);
    x(0, 1) = x(1, 0) = cx{1.0, 0.0};
    pt.samples.push_back({PolarFactors{ComplexMatrix::identity(2), ComplexMatrix::identity(2)}});
    pt.samples.push_back({PolarFactors{ComplexMatrix::identity(2), x}});
    SpectralDecomposition sd0{{0.5, 0.5}, ComplexMatrix::identity(2)};
    REQUIRE_THROWS_MATCHES(align_transport(pt, sd0), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                               return e.code() == errc::degenerate_overlap;
                           }));
}

TEST_CASE("align_transport: step overlaps end real non-negative") {
    const DensityTrajectory traj = gen_dephasing(0.8, 2.0, 50);
    const SpectralTrajectory straj = spectral_trajectory(traj);
    const SpectralDecomposition sd0{straj.populations.front(), straj.frames.front()};
    const PolarTrajectory aligned =
        align_transport(polar_trajectory(kraus_trajectory(straj)), sd0);
    for (std::size_t mu = 0; mu < 2; ++mu)
        for (std::size_t k = 0; k + 1 < aligned.times.size(); ++k) {
            const ComplexMatrix step =
                aligned.samples[k][mu].u.adjoint() * aligned.samples[k + 1][mu].u;
            for (std::size_t i = 0; i < 2; ++i) {
                cx d{0.0, 0.0};
                for (std::size_t r = 0; r < 2; ++r)
                    for (std::size_t c = 0; c < 2; ++c)
                        d += std::conj(sd0.basis(r, i)) * step(r, c) * sd0.basis(c, i);
                if (std::abs(d) < 1e-12) continue;
                REQUIRE(std::abs(d.imag()) <= 1e-12);
                REQUIRE(d.real() >= 0.0);
            }
        }
}

TEST_CASE("geometric_phase: constant trajectory carries no phase") {
    auto rng = make_rng(602);
    const DensityMatrix rho = random_density(2, rng);
    std::vector<ComplexMatrix> states{rho.mat, rho.mat, rho.mat};
    const PhaseReport rep = geometric_phase(make_trajectory({0.0, 0.5, 1.0}, states));
    REQUIRE(rep.aligned);
    REQUIRE(rep.phases[0].alpha == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("geometric_phase: Bloch loops match the solid-angle value") {
    const PhaseReport great =
        geometric_phase(gen_unitary_precession(kPi / 2.0, 2.0 * kPi, 1.0, 500, 1.0));
    REQUIRE(angdist(great.phases[0].alpha, -kPi) <= 1e-2);

    const PhaseReport cone =
        geometric_phase(gen_unitary_precession(kPi / 3.0, 2.0 * kPi, 1.0, 500, 1.0));
    REQUIRE(angdist(cone.phases[0].alpha, -kPi / 2.0) <= 1e-3);

    // First-order transport residuals shrink with the grid.
    const PhaseReport fine =
        geometric_phase(gen_unitary_precession(kPi / 3.0, 2.0 * kPi, 1.0, 1000, 1.0));
    REQUIRE(fine.transport_residual_max[0] <= 0.55 * cone.transport_residual_max[0]);
}

TEST_CASE("geometric_phase: matches the Pancharatnam oracle on random paths") {
    auto rng = make_rng(603);
    for (int it = 0; it < 5; ++it) {
        const PureQubitPath path = random_pure_qubit_path(201, rng);
        const PhaseReport rep = geometric_phase(path.traj);
        REQUIRE(rep.phases[0].defined);
        REQUIRE(angdist(rep.phases[0].alpha, pancharatnam_oracle(path.psis)) <= 1e-8);
    }
}
