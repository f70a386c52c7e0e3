// Batch front end: connect / apply / verify / kraus-traj / dilate / phase /
// gen over JSON matrix and trajectory files.
//
// Exit codes: 0 ok, 1 tolerance gate failed, 2 validation failure, 3 I/O
// failure. Each command prints one summary line on stdout and writes a full
// report file; errors go to stderr as a single JSON line.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "krauskit/io.hpp"
#include "krauskit/krauskit.hpp"

namespace {

using namespace krauskit;

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

void emit_error(const std::string& name, const std::string& message) {
    std::fprintf(stderr, "{\"error\": \"%s\", \"message\": \"%s\"}\n", name.c_str(),
                 json_escape(message).c_str());
}

int exit_code_for(const Error& e) {
    return e.code() == errc::io_failure ? 3 : 2;
}

const char* pass_str(bool pass) { return pass ? "pass" : "fail"; }

struct CommonOpts {
    double tol = 1e-10;
    std::string out;
};

Tolerances make_tol(const CommonOpts& o) {
    Tolerances t;
    t.eq_tol = o.tol;
    t.check();
    return t;
}

int cmd_connect(const std::string& a_path, const std::string& b_path, const CommonOpts& o) {
    const Tolerances tol = make_tol(o);
    const DensityMatrix rho_a = validate_density(read_matrix_file(a_path), tol);
    const DensityMatrix rho_b = validate_density(read_matrix_file(b_path), tol);
    const KrausSet ks = connect(rho_a, rho_b, tol);
    const KrausVerifyReport rep = verify_kraus(ks, rho_a, rho_b, tol);
    write_kraus_file(o.out, ks, rep, tol.eq_tol);
    std::printf("connect dim=%zu operators=%zu completeness_defect=%.3e "
                "reconstruction_defect=%.3e %s\n",
                ks.dim, ks.ops.size(), rep.completeness_defect, rep.reconstruction_defect,
                pass_str(rep.pass));
    return rep.pass ? 0 : 1;
}

int cmd_apply(const std::string& kraus_path, const std::string& rho_path,
              const CommonOpts& o) {
    const Tolerances tol = make_tol(o);
    const KrausSet ks = read_kraus_file(kraus_path);
    const DensityMatrix rho = validate_density(read_matrix_file(rho_path), tol);
    const DensityMatrix out = apply_channel(ks, rho, tol);
    write_matrix_file(o.out, out.mat);
    std::printf("apply dim=%zu operators=%zu trace=%.12f\n", out.dim, ks.ops.size(),
                out.mat.trace().real());
    return 0;
}

int cmd_verify(const std::string& kraus_path, const std::string& a_path,
               const std::string& b_path, const CommonOpts& o) {
    const Tolerances tol = make_tol(o);
    const KrausSet ks = read_kraus_file(kraus_path);
    const DensityMatrix rho_a = validate_density(read_matrix_file(a_path), tol);
    const DensityMatrix rho_b = validate_density(read_matrix_file(b_path), tol);
    const KrausVerifyReport rep = verify_kraus(ks, rho_a, rho_b, tol);
    write_verify_report_file(o.out, rep, tol.eq_tol);
    std::printf("verify dim=%zu completeness_defect=%.3e reconstruction_defect=%.3e %s\n",
                ks.dim, rep.completeness_defect, rep.reconstruction_defect,
                pass_str(rep.pass));
    return rep.pass ? 0 : 1;
}

int cmd_kraus_traj(const std::string& traj_path, const CommonOpts& o) {
    const Tolerances tol = make_tol(o);
    const TrajectoryFileData data = read_trajectory_file(traj_path);
    const DensityTrajectory traj = make_trajectory(data.times, data.states, tol);
    const SpectralTrajectory straj = spectral_trajectory(traj, tol);
    const KrausTrajectory kt = kraus_trajectory(straj, tol);
    std::vector<KrausVerifyReport> reports;
    reports.reserve(kt.sets.size());
    double max_comp = 0.0, max_recon = 0.0;
    bool all_pass = true;
    for (std::size_t k = 0; k < kt.sets.size(); ++k) {
        reports.push_back(verify_kraus(kt.sets[k], traj.states.front(), traj.states[k], tol));
        max_comp = std::max(max_comp, reports.back().completeness_defect);
        max_recon = std::max(max_recon, reports.back().reconstruction_defect);
        all_pass = all_pass && reports.back().pass;
    }
    write_kraus_trajectory_file(o.out, kt, reports, tol.eq_tol);
    std::printf("kraus-traj samples=%zu max_completeness_defect=%.3e "
                "max_reconstruction_defect=%.3e %s\n",
                kt.sets.size(), max_comp, max_recon, pass_str(all_pass));
    return all_pass ? 0 : 1;
}

int cmd_dilate(const std::string& rho0_path, const std::string& rhot_path,
               const std::string& basis, const CommonOpts& o) {
    const Tolerances tol = make_tol(o);
    const DensityMatrix rho0 = validate_density(read_matrix_file(rho0_path), tol);
    const DensityMatrix rho_t = validate_density(read_matrix_file(rhot_path), tol);
    const KrausSet ks = connect(rho0, rho_t, tol);
    const SpectralDecomposition sd0 = spectral_decompose(rho0, tol);
    const DilationUnitary du = build_dilation(ks, sd0, tol);
    const DilationVerifyReport rep = verify_dilation(du, rho0, rho_t, tol);
    const ComplexMatrix mat =
        basis == "computational" ? dilation_in_computational_basis(du, sd0) : du.u;
    write_dilation_file(o.out, du, mat, basis, rep, tol.eq_tol);
    std::printf("dilate system_dim=%zu ancilla_dim=%zu basis=%s unitarity_defect=%.3e "
                "recovery_defect=%.3e %s\n",
                du.system_dim, du.ancilla_dim, basis.c_str(), rep.unitarity_defect,
                rep.recovery_defect, pass_str(rep.pass));
    return rep.pass ? 0 : 1;
}

int cmd_phase(const std::string& traj_path, const CommonOpts& o) {
    const Tolerances tol = make_tol(o);
    const TrajectoryFileData data = read_trajectory_file(traj_path);
    const DensityTrajectory traj = make_trajectory(data.times, data.states, tol);
    const SpectralTrajectory straj = spectral_trajectory(traj, tol);
    const KrausTrajectory kt = kraus_trajectory(straj, tol);
    double max_comp = 0.0, max_recon = 0.0;
    bool all_pass = true;
    for (std::size_t k = 0; k < kt.sets.size(); ++k) {
        const KrausVerifyReport rep =
            verify_kraus(kt.sets[k], traj.states.front(), traj.states[k], tol);
        max_comp = std::max(max_comp, rep.completeness_defect);
        max_recon = std::max(max_recon, rep.reconstruction_defect);
        all_pass = all_pass && rep.pass;
    }
    const PolarTrajectory pt = polar_trajectory(kt, tol);
    const SpectralDecomposition sd0{straj.populations.front(), straj.frames.front()};
    const PolarTrajectory aligned = align_transport(pt, sd0);
    const TransportResiduals res = transport_residuals(aligned, sd0);
    PhaseReport rep = relative_phases(recompose(aligned), traj.states.front());
    rep.aligned = true;
    rep.transport_residual_max = res.max_per_mu;
    write_phase_file(o.out, rep, tol.eq_tol, max_comp, max_recon);
    std::size_t undefined = 0;
    for (const PhaseEntry& e : rep.phases)
        if (!e.defined) ++undefined;
    std::printf("phase alpha_0=%.9f magnitude_0=%.6f undefined=%zu max_residual=%.3e %s\n",
                rep.phases.front().alpha, rep.phases.front().magnitude, undefined,
                res.max_per_mu.front(), pass_str(all_pass));
    return all_pass ? 0 : 1;
}

struct GenOpts {
    std::string kind;
    std::size_t steps = 200;
    double gamma = 1.0;
    double theta = 1.5707963267948966;
    double omega = 6.283185307179586;
    double tau = 1.0;
    double purity = 1.0;
    std::string rho0_path;
};

int cmd_gen(const GenOpts& g, const CommonOpts& o) {
    const Tolerances tol = make_tol(o);
    DensityTrajectory traj;
    if (g.kind == "dephasing") {
        traj = gen_dephasing(g.gamma, g.tau, g.steps, tol);
    } else if (g.kind == "depolarizing") {
        if (g.rho0_path.empty())
            throw Error(errc::bad_params, "gen depolarizing requires --rho0");
        const DensityMatrix rho0 = validate_density(read_matrix_file(g.rho0_path), tol);
        traj = gen_depolarizing(g.gamma, rho0, g.tau, g.steps, tol);
    } else if (g.kind == "precession") {
        traj = gen_unitary_precession(g.theta, g.omega, g.tau, g.steps, g.purity, tol);
    } else {
        throw Error(errc::bad_params, "unknown generator: " + g.kind);
    }
    write_trajectory_file(o.out, traj);
    std::printf("gen %s samples=%zu tau=%.17g\n", g.kind.c_str(), traj.times.size(), g.tau);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kraus-set construction, verification, dilation and phase extraction "
                 "for density-matrix files"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string path_a, path_b, path_c, basis = "eigen";
    GenOpts gen_opts;

    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--tol", common.tol, "equality tolerance (default 1e-10)");
        sub->add_option("--out", common.out, "output file path")->required();
    };

    CLI::App* connect_cmd =
        app.add_subcommand("connect", "build the Kraus set carrying state A onto state B");
    connect_cmd->add_option("rho_a", path_a, "input state file")->required();
    connect_cmd->add_option("rho_b", path_b, "target state file")->required();
    add_common(connect_cmd);

    CLI::App* apply_cmd = app.add_subcommand("apply", "apply a Kraus set to a state");
    apply_cmd->add_option("kraus", path_a, "Kraus set file")->required();
    apply_cmd->add_option("rho", path_b, "state file")->required();
    add_common(apply_cmd);

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "check completeness and reconstruction of a Kraus set");
    verify_cmd->add_option("kraus", path_a, "Kraus set file")->required();
    verify_cmd->add_option("rho_a", path_b, "input state file")->required();
    verify_cmd->add_option("rho_b", path_c, "target state file")->required();
    add_common(verify_cmd);

    CLI::App* traj_cmd = app.add_subcommand(
        "kraus-traj", "per-sample Kraus sets for a density trajectory");
    traj_cmd->add_option("trajectory", path_a, "trajectory file")->required();
    add_common(traj_cmd);

    CLI::App* dilate_cmd = app.add_subcommand(
        "dilate", "system(x)ancilla unitary reproducing the evolution rho0 -> rho_t");
    dilate_cmd->add_option("rho0", path_a, "initial state file")->required();
    dilate_cmd->add_option("rho_t", path_b, "final state file")->required();
    dilate_cmd->add_option("--basis", basis, "matrix basis: eigen|computational")
        ->check(CLI::IsMember({"eigen", "computational"}));
    add_common(dilate_cmd);

    CLI::App* phase_cmd = app.add_subcommand(
        "phase", "relative phases of the transport-aligned Kraus trajectory");
    phase_cmd->add_option("trajectory", path_a, "trajectory file")->required();
    add_common(phase_cmd);

    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a fixture trajectory");
    gen_cmd->add_option("kind", gen_opts.kind, "dephasing|depolarizing|precession")
        ->required();
    gen_cmd->add_option("--steps", gen_opts.steps, "time intervals (default 200)");
    gen_cmd->add_option("--gamma", gen_opts.gamma, "decay rate (dephasing/depolarizing)");
    gen_cmd->add_option("--theta", gen_opts.theta, "Bloch polar angle (precession)");
    gen_cmd->add_option("--omega", gen_opts.omega, "angular rate (precession)");
    gen_cmd->add_option("--tau", gen_opts.tau, "duration (default 1)");
    gen_cmd->add_option("--purity", gen_opts.purity, "top eigenvalue in [1/2,1]");
    gen_cmd->add_option("--rho0", gen_opts.rho0_path, "initial state (depolarizing)");
    add_common(gen_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        emit_error("UsageError", e.what());
        return 2;
    }

    try {
        if (connect_cmd->parsed()) return cmd_connect(path_a, path_b, common);
        if (apply_cmd->parsed()) return cmd_apply(path_a, path_b, common);
        if (verify_cmd->parsed()) return cmd_verify(path_a, path_b, path_c, common);
        if (traj_cmd->parsed()) return cmd_kraus_traj(path_a, common);
        if (dilate_cmd->parsed()) return cmd_dilate(path_a, path_b, basis, common);
        if (phase_cmd->parsed()) return cmd_phase(path_a, common);
        if (gen_cmd->parsed()) return cmd_gen(gen_opts, common);
    } catch (const Error& e) {
        emit_error(errc_name(e.code()), e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        emit_error("Internal", e.what());
        return 2;
    }
    return 2;
}
