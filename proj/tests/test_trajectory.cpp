#include <catch2/catch_amalgamated.hpp>

#include "krauskit/trajectory.hpp"
#include "test_support.hpp"

using namespace krauskit;
using namespace testsupport;

static double max_frame_step(const SpectralTrajectory& straj) {
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < straj.frames.size(); ++k)
        m = std::max(m, frobenius_distance(straj.frames[k + 1], straj.frames[k]));
    return m;
}

TEST_CASE("generators: parameter gates") {
    REQUIRE_THROWS_AS(gen_dephasing(1.0, 1.0, 1), Error);
    REQUIRE_THROWS_AS(gen_dephasing(-1.0, 1.0, 10), Error);
    REQUIRE_THROWS_AS(gen_dephasing(1.0, -1.0, 10), Error);
    REQUIRE_THROWS_AS(gen_unitary_precession(1.0, 1.0, 1.0, 10, 0.3), Error);
    auto rng = make_rng(401);
    REQUIRE_THROWS_AS(gen_depolarizing(-0.5, random_density(2, rng), 1.0, 10), Error);
}

TEST_CASE("gen_dephasing: closed-form eigenstructure") {
    const double gamma = 1.3, tau = 2.0;
    const DensityTrajectory traj = gen_dephasing(gamma, tau, 50);
    REQUIRE(traj.times.size() == 51);
    REQUIRE(traj.times.front() == 0.0);
    REQUIRE(traj.times.back() == tau);
    const SpectralTrajectory straj = spectral_trajectory(traj);
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double decay = std::exp(-gamma * traj.times[k]);
        REQUIRE(straj.populations[k][0] ==
                Catch::Approx((1.0 + decay) / 2.0).margin(1e-12));
        REQUIRE(straj.populations[k][1] ==
                Catch::Approx((1.0 - decay) / 2.0).margin(1e-12));
        // Eigenvectors stay |+>, |-> for all times.
        REQUIRE(std::abs(straj.frames[k](0, 0) - cx{s, 0.0}) < 1e-12);
        REQUIRE(std::abs(straj.frames[k](1, 0) - cx{s, 0.0}) < 1e-12);
    }
    // gamma = 0 freezes the trajectory.
    const DensityTrajectory frozen = gen_dephasing(0.0, 1.0, 10);
    for (const DensityMatrix& st : frozen.states)
        REQUIRE(frobenius_distance(st.mat, frozen.states.front().mat) == 0.0);
}

TEST_CASE("gen_depolarizing: constant eigenvectors, affine eigenvalues") {
    auto rng = make_rng(402);
    const DensityMatrix rho0 = random_density(3, rng);
    const double lambda = 0.9, tau = 2.5;
    const DensityTrajectory traj = gen_depolarizing(lambda, rho0, tau, 60);
    const SpectralDecomposition sd0 = spectral_decompose(rho0);
    const SpectralTrajectory straj = spectral_trajectory(traj);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double w = std::exp(-lambda * traj.times[k]);
        for (std::size_t i = 0; i < 3; ++i) {
            const double expect = w * sd0.eigenvalues[i] + (1.0 - w) / 3.0;
            REQUIRE(straj.populations[k][i] == Catch::Approx(expect).margin(1e-10));
        }
        REQUIRE(frobenius_distance(straj.frames[k], straj.frames.front()) < 1e-8);
    }
    // lambda = 0 freezes; the far-time limit is maximally mixed.
    const DensityTrajectory frozen = gen_depolarizing(0.0, rho0, 1.0, 5);
    REQUIRE(frobenius_distance(frozen.states.back().mat, rho0.mat) == 0.0);
    const DensityTrajectory late = gen_depolarizing(8.0, rho0, 10.0, 5);
    REQUIRE(frobenius_distance(late.states.back().mat, ComplexMatrix::identity(3) * (1.0 / 3.0)) <
            1e-10);
}

TEST_CASE("gen_unitary_precession: validity and degenerate axis") {
    const DensityTrajectory constant = gen_unitary_precession(0.0, 3.0, 1.0, 20, 0.8);
    for (const DensityMatrix& st : constant.states)
        REQUIRE(frobenius_distance(st.mat, constant.states.front().mat) < 1e-15);

    const DensityTrajectory loop =
        gen_unitary_precession(kPi / 2.0, 2.0 * kPi, 1.0, 100, 1.0);
    for (const DensityMatrix& st : loop.states) {
        // make_trajectory already validated every sample; spot-check purity.
        REQUIRE(std::abs((st.mat * st.mat).trace().real() - 1.0) < 1e-12);
    }
    REQUIRE(frobenius_distance(loop.states.back().mat, loop.states.front().mat) < 1e-12);
}

TEST_CASE("make_trajectory: shape gates") {
    std::vector<ComplexMatrix> states{ComplexMatrix::identity(2) * 0.5,
                                      ComplexMatrix::identity(2) * 0.5};
    REQUIRE_THROWS_AS(make_trajectory({0.0}, {states[0]}, {}), Error);
    REQUIRE_THROWS_AS(make_trajectory({0.0, 0.0}, states, {}), Error);
    REQUIRE_NOTHROW(make_trajectory({0.0, 1.0}, states, {}));
}

TEST_CASE("spectral_trajectory: constant trajectory keeps its frame") {
    auto rng = make_rng(403);
    const DensityMatrix rho = random_density(3, rng);
    std::vector<double> times{0.0, 0.5, 1.0};
    std::vector<ComplexMatrix> states{rho.mat, rho.mat, rho.mat};
    const SpectralTrajectory straj =
        spectral_trajectory(make_trajectory(times, states));
    for (std::size_t k = 1; k < 3; ++k) {
        REQUIRE(frobenius_distance(straj.frames[k], straj.frames[0]) < 1e-12);
        for (std::size_t i = 0; i < 3; ++i)
            REQUIRE(straj.populations[k][i] ==
                    Catch::Approx(straj.populations[0][i]).margin(1e-12));
    }
}

TEST_CASE("spectral_trajectory: per-sample reconstruction") {
    const DensityTrajectory traj =
        gen_unitary_precession(1.0, 2.0 * kPi, 1.0, 150, 0.8);
    const SpectralTrajectory straj = spectral_trajectory(traj);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const SpectralDecomposition sd{straj.populations[k], straj.frames[k]};
        REQUIRE(frobenius_distance(reconstruct(sd).mat, traj.states[k].mat) <= 1e-10);
        REQUIRE(unitarity_defect(straj.frames[k]) <= 1e-10);
    }
}

TEST_CASE("spectral_trajectory: matched gauge is grid-continuous") {
    double prev = 0.0;
    for (std::size_t steps : {200, 400, 800}) {
        const DensityTrajectory traj =
            gen_unitary_precession(1.0, 2.0 * kPi, 1.0, steps, 0.85);
        const double m = max_frame_step(spectral_trajectory(traj));
        if (prev > 0.0) REQUIRE(m <= 0.6 * prev);  // halves, with 20% slack
        prev = m;
    }
}

TEST_CASE("spectral_trajectory: flags unresolvable crossings") {
    // Second sample shares the spectrum but lives in the Fourier basis; every
    // overlap has modulus 1/sqrt(3), an exact tie below 1/sqrt(2).
    ComplexMatrix d(3, 3);
    d(0, 0) = cx{0.5, 0.0};
    d(1, 1) = cx{0.3, 0.0};
    d(2, 2) = cx{0.2, 0.0};
    ComplexMatrix f(3, 3);
    const double s = 1.0 / std::sqrt(3.0);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            f(r, c) = std::polar(s, 2.0 * kPi * static_cast<double>(r * c) / 3.0);
    const ComplexMatrix rotated = f * d * f.adjoint();
    const DensityTrajectory traj = make_trajectory({0.0, 1.0}, {d, rotated});
    REQUIRE_THROWS_MATCHES(spectral_trajectory(traj), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                               return e.code() == errc::ambiguous_matching;
                           }));
}

TEST_CASE("kraus_trajectory: pure initial state structure") {
    const DensityTrajectory traj =
        gen_unitary_precession(1.2, 2.0 * kPi, 1.0, 100, 1.0);
    const SpectralTrajectory straj = spectral_trajectory(traj);
    const KrausTrajectory kt = kraus_trajectory(straj);
    // At t_0 the leading operator is the projector onto psi(0) and the shift
    // operator sees the orthogonal branch. A numerically pure state leaks
    // O(sqrt(eps)) into both through the square root of its spectrum.
    REQUIRE(frobenius_distance(kt.sets.front().ops[0], traj.states.front().mat) <= 1e-8);
    REQUIRE(std::abs((kt.sets.front().ops[1] * traj.states.front().mat).trace()) <= 1e-8);
    // Along the path M_0(t) = |psi(t)><psi(0)| up to the matched gauge,
    // within the same leakage bound.
    for (std::size_t k = 0; k < kt.times.size(); k += 25) {
        ComplexMatrix expect(2, 2);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c)
                expect(r, c) = straj.frames[k](r, 0) * std::conj(straj.frames[0](c, 0));
        REQUIRE(frobenius_distance(kt.sets[k].ops[0], expect) <= 1e-8);
    }
}

TEST_CASE("kraus_trajectory: per-sample verification on fixtures") {
    auto rng = make_rng(404);
    std::vector<DensityTrajectory> fixtures;
    fixtures.push_back(gen_dephasing(1.0, 3.0, 120));
    fixtures.push_back(gen_depolarizing(1.1, random_density(3, rng), 2.0, 100));
    fixtures.push_back(gen_unitary_precession(0.9, 2.0 * kPi, 1.0, 100, 0.75));
    fixtures.push_back(random_walk_trajectory(3, 80, 0.02, rng));
    for (const DensityTrajectory& traj : fixtures) {
        const KrausTrajectory kt = kraus_trajectory(spectral_trajectory(traj));
        for (std::size_t k = 0; k < kt.times.size(); ++k) {
            const KrausVerifyReport rep =
                verify_kraus(kt.sets[k], traj.states.front(), traj.states[k]);
            REQUIRE(rep.completeness_defect <= 1e-10);
            REQUIRE(rep.reconstruction_defect <= 1e-10);
        }
    }
}

TEST_CASE("kraus_trajectory: validity is eigen-gauge independent") {
    auto rng = make_rng(405);
    const DensityTrajectory traj = random_walk_trajectory(3, 60, 0.03, rng);
    const SpectralTrajectory straj =
        spectral_trajectory(traj, {}, EigenGauge::static_per_time);
    const KrausTrajectory kt = kraus_trajectory(straj);
    for (std::size_t k = 0; k < kt.times.size(); ++k)
        REQUIRE(verify_kraus(kt.sets[k], traj.states.front(), traj.states[k]).pass);
}
