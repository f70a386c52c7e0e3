#pragma once

// Density-matrix validation and spectral decomposition with the ordering and
// gauge conventions every downstream construction relies on.

#include <cmath>
#include <cstddef>
#include <vector>

#include "krauskit/linalg.hpp"
#include "krauskit/matrix.hpp"

namespace krauskit {

struct DensityMatrix {
    std::size_t dim = 0;
    ComplexMatrix mat;
};

struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // descending probabilities, sum 1
    ComplexMatrix basis;              // unitary, i-th column is the i-th eigenvector
};

// Checks Hermiticity, unit trace and positive semidefiniteness (eigenvalues
// above -eq_tol). The matrix is stored as given.
inline DensityMatrix validate_density(const ComplexMatrix& mat, const Tolerances& tol = {}) {
    tol.check();
    if (!mat.is_square())
        throw Error(errc::dimension_mismatch, "density matrix must be square");
    if (!mat.all_finite())
        throw Error(errc::bad_params, "density matrix has non-finite entries");
    if (hermiticity_defect(mat) > tol.eq_tol * (1.0 + mat.frobenius_norm()))
        throw Error(errc::not_hermitian, "density matrix is not Hermitian");
    if (std::abs(mat.trace() - cx{1.0, 0.0}) > tol.eq_tol)
        throw Error(errc::not_unit_trace, "density matrix trace is not 1");
    const EigResult eig = hermitian_eig(mat, tol);
    if (eig.eigenvalues.back() < -tol.eq_tol)
        throw Error(errc::not_psd, "density matrix has a negative eigenvalue");
    return DensityMatrix{mat.rows(), mat};
}

// Eigendecomposition of a valid state. Eigenvalues in (-eq_tol, 0) are
// clipped to zero and the spectrum renormalized to unit sum, so downstream
// consumers always see a probability vector.
inline SpectralDecomposition spectral_decompose(const DensityMatrix& rho,
                                                const Tolerances& tol = {}) {
    EigResult eig = hermitian_eig(rho.mat, tol);
    double sum = 0.0;
    for (double& p : eig.eigenvalues) {
        if (p < 0.0) {
            if (p < -tol.eq_tol)
                throw Error(errc::not_psd, "spectral_decompose: negative eigenvalue");
            p = 0.0;
        }
        sum += p;
    }
    if (sum <= 0.0)
        throw Error(errc::not_psd, "spectral_decompose: vanishing spectrum");
    for (double& p : eig.eigenvalues) p /= sum;
    return SpectralDecomposition{std::move(eig.eigenvalues), std::move(eig.vectors)};
}

// U diag(p) U^dagger.
inline DensityMatrix reconstruct(const SpectralDecomposition& sd) {
    const std::size_t n = sd.basis.rows();
    ComplexMatrix scaled(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < n; ++r) scaled(r, j) = sd.basis(r, j) * sd.eigenvalues[j];
    return DensityMatrix{n, scaled * sd.basis.adjoint()};
}

}  // namespace krauskit
