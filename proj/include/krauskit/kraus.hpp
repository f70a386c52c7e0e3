#pragma once

// Kraus-set construction and verification: the cyclic-shift family for
// diagonal states, the set connecting two arbitrary states, channel
// application, and the unitary mixing freedom.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "krauskit/density.hpp"
#include "krauskit/linalg.hpp"
#include "krauskit/matrix.hpp"

namespace krauskit {

struct KrausSet {
    std::size_t dim = 0;
    std::vector<ComplexMatrix> ops;
    std::string label;
};

struct KrausVerifyReport {
    double completeness_defect = 0.0;   // ||sum M^dagger M - I||_F
    double reconstruction_defect = 0.0; // ||sum M rho_A M^dagger - rho_B||_F
    bool pass = false;
};

// Shift family for a diagonal target spectrum: operator mu carries sqrt(p_i)
// on the mu-th cyclic off-diagonal, (M_mu)_{i,(i+mu) mod N} = sqrt(p_i).
// Completeness holds exactly because each column collects the full spectrum.
inline KrausSet build_shift_family(const std::vector<double>& p_target,
                                   const Tolerances& tol = {}) {
    tol.check();
    const std::size_t n = p_target.size();
    if (n == 0)
        throw Error(errc::bad_probability_vector, "empty probability vector");
    double sum = 0.0;
    for (double p : p_target) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw Error(errc::bad_probability_vector, "probabilities must be >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > tol.eq_tol)
        throw Error(errc::bad_probability_vector, "probabilities must sum to 1");

    KrausSet ks;
    ks.dim = n;
    ks.label = "shift";
    ks.ops.reserve(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, (i + mu) % n) = cx{std::sqrt(p_target[i]), 0.0};
        ks.ops.push_back(std::move(m));
    }
    return ks;
}

// Kraus operators carrying rho_a onto rho_b: diagonalize both states and
// sandwich the shift family, M_mu = U_b M'_mu U_a^dagger.
inline KrausSet connect(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                        const Tolerances& tol = {}) {
    if (rho_a.dim != rho_b.dim)
        throw Error(errc::dimension_mismatch, "connect: states have different dimensions");
    const SpectralDecomposition sda = spectral_decompose(rho_a, tol);
    const SpectralDecomposition sdb = spectral_decompose(rho_b, tol);
    const ComplexMatrix ua_dag = sda.basis.adjoint();

    KrausSet ks = build_shift_family(sdb.eigenvalues, tol);
    for (ComplexMatrix& m : ks.ops) m = sdb.basis * m * ua_dag;
    ks.label = "connect";
    return ks;
}

// sum_mu M_mu rho M_mu^dagger, revalidated as a state.
inline DensityMatrix apply_channel(const KrausSet& ks, const DensityMatrix& rho,
                                   const Tolerances& tol = {}) {
    if (ks.dim != rho.dim)
        throw Error(errc::dimension_mismatch, "apply_channel: dimension mismatch");
    ComplexMatrix out(ks.dim, ks.dim);
    for (const ComplexMatrix& m : ks.ops) out += m * rho.mat * m.adjoint();
    try {
        return validate_density(out, tol);
    } catch (const Error& e) {
        throw Error(errc::output_not_density,
                    std::string("channel output is not a state (") + e.what() + ")");
    }
}

// Diagnostic report; never throws on defects, only on malformed shapes.
inline KrausVerifyReport verify_kraus(const KrausSet& ks, const DensityMatrix& rho_a,
                                      const DensityMatrix& rho_b, const Tolerances& tol = {}) {
    tol.check();
    if (ks.dim != rho_a.dim || ks.dim != rho_b.dim)
        throw Error(errc::dimension_mismatch, "verify_kraus: dimension mismatch");
    ComplexMatrix completeness(ks.dim, ks.dim);
    ComplexMatrix mapped(ks.dim, ks.dim);
    for (const ComplexMatrix& m : ks.ops) {
        completeness += m.adjoint() * m;
        mapped += m * rho_a.mat * m.adjoint();
    }
    KrausVerifyReport rep;
    rep.completeness_defect =
        frobenius_distance(completeness, ComplexMatrix::identity(ks.dim));
    rep.reconstruction_defect = frobenius_distance(mapped, rho_b.mat);
    rep.pass = rep.completeness_defect <= tol.eq_tol &&
               rep.reconstruction_defect <= tol.eq_tol;
    return rep;
}

// Equivalent set under the mixing freedom: M~_mu = sum_nu M_nu V_{mu,nu}
// for a unitary V over the operator index. The channel action is unchanged.
inline KrausSet mix_kraus(const KrausSet& ks, const ComplexMatrix& v,
                          const Tolerances& tol = {}) {
    tol.check();
    if (!v.is_square() || v.rows() != ks.ops.size())
        throw Error(errc::not_unitary_mixer,
                    "mix_kraus: mixer side must equal the operator count");
    if (unitarity_defect(v) > tol.eq_tol)
        throw Error(errc::not_unitary_mixer, "mix_kraus: mixer is not unitary");

    KrausSet out;
    out.dim = ks.dim;
    out.label = ks.label.empty() ? "mixed" : ks.label + ":mixed";
    out.ops.reserve(ks.ops.size());
    for (std::size_t mu = 0; mu < ks.ops.size(); ++mu) {
        ComplexMatrix acc(ks.dim, ks.dim);
        for (std::size_t nu = 0; nu < ks.ops.size(); ++nu)
            acc += ks.ops[nu] * v(mu, nu);
        out.ops.push_back(std::move(acc));
    }
    return out;
}

}  // namespace krauskit
