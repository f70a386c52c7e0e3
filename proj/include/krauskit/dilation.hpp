#pragma once

// The inverse problem: embed a Kraus set into a unitary on system (x) ancilla
// whose ancilla-traced action reproduces the open-system step, plus the
// finite-difference Hamiltonian along a sequence of such unitaries.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "krauskit/density.hpp"
#include "krauskit/kraus.hpp"
#include "krauskit/linalg.hpp"
#include "krauskit/matrix.hpp"

namespace krauskit {

struct DilationUnitary {
    std::size_t system_dim = 0;   // N
    std::size_t ancilla_dim = 0;  // K = number of Kraus operators
    ComplexMatrix u;              // (N*K)x(N*K), system-major index (i,j) -> i*K + j
    std::string basis_note;
};

struct DilationVerifyReport {
    double unitarity_defect = 0.0;
    double recovery_defect = 0.0;
    bool pass = false;
};

// Columns (k,0) are pinned to the Kraus matrix elements taken in the rho(0)
// eigenbasis, U_{(i,j),(k,0)} = <psi_i(0)| M_j |psi_k(0)>; completeness makes
// those N columns orthonormal, and the remaining N*K - N columns come from
// the deterministic Gram-Schmidt completion.
inline DilationUnitary build_dilation(const KrausSet& ks, const SpectralDecomposition& sd0,
                                      const Tolerances& tol = {}) {
    tol.check();
    const std::size_t n = ks.dim;
    const std::size_t k = ks.ops.size();
    if (k == 0 || sd0.basis.rows() != n)
        throw Error(errc::dimension_mismatch, "build_dilation: inconsistent inputs");
    ComplexMatrix completeness(n, n);
    for (const ComplexMatrix& m : ks.ops) completeness += m.adjoint() * m;
    if (frobenius_distance(completeness, ComplexMatrix::identity(n)) > tol.eq_tol)
        throw Error(errc::completeness_defect,
                    "build_dilation: Kraus set fails completeness");

    const std::size_t d = n * k;
    ComplexMatrix pinned(d, n);
    for (std::size_t j = 0; j < k; ++j) {
        const ComplexMatrix mj = sd0.basis.adjoint() * ks.ops[j] * sd0.basis;
        for (std::size_t col = 0; col < n; ++col)
            for (std::size_t i = 0; i < n; ++i) pinned(i * k + j, col) = mj(i, col);
    }
    const ComplexMatrix packed = complete_to_unitary(pinned, tol);

    // Scatter: input column col goes to position col*K, completion columns
    // fill the remaining positions in index order.
    ComplexMatrix u(d, d);
    std::vector<bool> taken(d, false);
    for (std::size_t col = 0; col < n; ++col) {
        u.set_column(col * k, packed.column(col));
        taken[col * k] = true;
    }
    std::size_t next = n;
    for (std::size_t pos = 0; pos < d; ++pos) {
        if (taken[pos]) continue;
        u.set_column(pos, packed.column(next++));
    }

    DilationUnitary du;
    du.system_dim = n;
    du.ancilla_dim = k;
    du.u = std::move(u);
    du.basis_note = "system factor expressed in eigenbasis of rho(0)";
    return du;
}

// Same dilation conjugated into the computational basis of the system factor.
inline ComplexMatrix dilation_in_computational_basis(const DilationUnitary& du,
                                                     const SpectralDecomposition& sd0) {
    const ComplexMatrix lift = kron(sd0.basis, ComplexMatrix::identity(du.ancilla_dim));
    return lift * du.u * lift.adjoint();
}

// Checks U^dagger U = I and tr_a[U (rho~(0) (x) |0><0|) U^dagger] = rho~(t),
// with both states expressed in the rho(0) eigenbasis.
inline DilationVerifyReport verify_dilation(const DilationUnitary& du,
                                            const DensityMatrix& rho0,
                                            const DensityMatrix& rho_t,
                                            const Tolerances& tol = {}) {
    tol.check();
    const std::size_t n = du.system_dim;
    const std::size_t k = du.ancilla_dim;
    if (rho0.dim != n || rho_t.dim != n || du.u.rows() != n * k || !du.u.is_square())
        throw Error(errc::dimension_mismatch, "verify_dilation: dimension mismatch");

    const SpectralDecomposition sd0 = spectral_decompose(rho0, tol);
    const ComplexMatrix rho0_eig = sd0.basis.adjoint() * rho0.mat * sd0.basis;
    const ComplexMatrix rhot_eig = sd0.basis.adjoint() * rho_t.mat * sd0.basis;

    ComplexMatrix ancilla0(k, k);
    ancilla0(0, 0) = cx{1.0, 0.0};
    const ComplexMatrix evolved = du.u * kron(rho0_eig, ancilla0) * du.u.adjoint();

    DilationVerifyReport rep;
    rep.unitarity_defect = unitarity_defect(du.u);
    rep.recovery_defect =
        frobenius_distance(partial_trace_ancilla(evolved, n, k), rhot_eig);
    rep.pass = rep.unitarity_defect <= tol.eq_tol && rep.recovery_defect <= tol.eq_tol;
    return rep;
}

struct HamiltonianSample {
    ComplexMatrix h;                    // Hermitized i (U_{k+1} - U_k)/dt U_k^dagger
    double hermitization_defect = 0.0;  // ||(H_raw - H_raw^dagger)/2||_F
};

// Finite-difference generator along a sequence of dilations. Completion
// discontinuities show up as large Hermitization defects; they are reported,
// not repaired.
inline std::vector<HamiltonianSample> hamiltonian_trajectory(
    const std::vector<DilationUnitary>& dus, const std::vector<double>& times) {
    if (dus.size() < 2 || times.size() != dus.size())
        throw Error(errc::too_few_samples, "hamiltonian_trajectory needs >= 2 samples");
    std::vector<HamiltonianSample> out;
    out.reserve(dus.size() - 1);
    const cx i_unit{0.0, 1.0};
    for (std::size_t k = 0; k + 1 < dus.size(); ++k) {
        if (dus[k].u.rows() != dus[k + 1].u.rows())
            throw Error(errc::dimension_mismatch, "hamiltonian_trajectory: mixed sizes");
        const double dt = times[k + 1] - times[k];
        if (!(dt > 0.0))
            throw Error(errc::bad_params, "hamiltonian_trajectory: non-increasing times");
        const ComplexMatrix raw =
            (dus[k + 1].u - dus[k].u) * (i_unit / dt) * dus[k].u.adjoint();
        const ComplexMatrix skew = (raw - raw.adjoint()) * cx{0.5, 0.0};
        HamiltonianSample s;
        s.h = (raw + raw.adjoint()) * cx{0.5, 0.0};
        s.hermitization_defect = skew.frobenius_norm();
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace krauskit
