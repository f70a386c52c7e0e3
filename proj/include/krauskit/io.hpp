#pragma once

// JSON file formats for states, trajectories, Kraus sets, dilations and
// phase reports. Writing goes through a fixed-order emitter with %.17g
// number formatting so identical inputs produce byte-identical files that
// round-trip doubles exactly. Parsing uses nlohmann/json.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "krauskit/density.hpp"
#include "krauskit/dilation.hpp"
#include "krauskit/geometric_phase.hpp"
#include "krauskit/kraus.hpp"
#include "krauskit/matrix.hpp"
#include "krauskit/trajectory.hpp"

namespace krauskit {

namespace detail {

inline std::string fmt_double(double x) {
    if (!std::isfinite(x))
        throw Error(errc::io_failure, "refusing to serialize a non-finite number");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

inline void append_complex(std::string& s, cx z) {
    s += '[';
    s += fmt_double(z.real());
    s += ", ";
    s += fmt_double(z.imag());
    s += ']';
}

inline void append_matrix_rows(std::string& s, const ComplexMatrix& m,
                               const std::string& indent) {
    s += "[\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        s += indent + "  [";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) s += ", ";
            append_complex(s, m(r, c));
        }
        s += (r + 1 < m.rows()) ? "],\n" : "]\n";
    }
    s += indent + "]";
}

inline void append_matrix_object(std::string& s, const ComplexMatrix& m,
                                 const std::string& indent) {
    s += "{\n";
    s += indent + "  \"dim\": " + std::to_string(m.rows()) + ",\n";
    s += indent + "  \"matrix\": ";
    append_matrix_rows(s, m, indent + "  ");
    s += "\n" + indent + "}";
}

inline void append_kraus_report(std::string& s, const KrausVerifyReport& rep,
                                const std::string& indent) {
    s += "{\n";
    s += indent + "  \"completeness_defect\": " + fmt_double(rep.completeness_defect) + ",\n";
    s += indent + "  \"reconstruction_defect\": " + fmt_double(rep.reconstruction_defect) +
         ",\n";
    s += indent + "  \"pass\": " + (rep.pass ? std::string("true") : std::string("false")) +
         "\n";
    s += indent + "}";
}

inline void append_kraus_object(std::string& s, const KrausSet& ks,
                                const KrausVerifyReport& rep, const std::string& indent) {
    s += "{\n";
    s += indent + "  \"dim\": " + std::to_string(ks.dim) + ",\n";
    s += indent + "  \"label\": \"" + ks.label + "\",\n";
    s += indent + "  \"operators\": [\n";
    for (std::size_t i = 0; i < ks.ops.size(); ++i) {
        s += indent + "    ";
        append_matrix_object(s, ks.ops[i], indent + "    ");
        s += (i + 1 < ks.ops.size()) ? ",\n" : "\n";
    }
    s += indent + "  ],\n";
    s += indent + "  \"report\": ";
    append_kraus_report(s, rep, indent + "  ");
    s += "\n" + indent + "}";
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io_failure, "cannot open for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw Error(errc::io_failure, "write failed: " + path);
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::io_failure, "cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::parse_error, path + ": " + e.what());
    }
}

inline ComplexMatrix parse_matrix(const nlohmann::json& j, const std::string& context) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("matrix"))
        throw Error(errc::parse_error, context + ": expected {dim, matrix}");
    const std::size_t dim = j.at("dim").get<std::size_t>();
    const auto& rows = j.at("matrix");
    if (!rows.is_array() || rows.size() != dim)
        throw Error(errc::parse_error, context + ": matrix row count != dim");
    ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const auto& row = rows.at(r);
        if (!row.is_array() || row.size() != dim)
            throw Error(errc::parse_error, context + ": ragged matrix row");
        for (std::size_t c = 0; c < dim; ++c) {
            const auto& entry = row.at(c);
            if (!entry.is_array() || entry.size() != 2 || !entry.at(0).is_number() ||
                !entry.at(1).is_number())
                throw Error(errc::parse_error, context + ": entry must be [re, im]");
            m(r, c) = cx{entry.at(0).get<double>(), entry.at(1).get<double>()};
        }
    }
    if (!m.all_finite())
        throw Error(errc::parse_error, context + ": non-finite entries");
    return m;
}

}  // namespace detail

inline ComplexMatrix read_matrix_file(const std::string& path) {
    return detail::parse_matrix(detail::read_json_file(path), path);
}

inline void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
    std::string s;
    detail::append_matrix_object(s, m, "");
    s += "\n";
    detail::write_text_file(path, s);
}

struct TrajectoryFileData {
    std::vector<double> times;
    std::vector<ComplexMatrix> states;
};

inline TrajectoryFileData read_trajectory_file(const std::string& path) {
    const nlohmann::json j = detail::read_json_file(path);
    if (!j.is_object() || !j.contains("times") || !j.contains("states"))
        throw Error(errc::parse_error, path + ": expected {times, states}");
    TrajectoryFileData data;
    for (const auto& t : j.at("times")) {
        if (!t.is_number()) throw Error(errc::parse_error, path + ": non-numeric time");
        data.times.push_back(t.get<double>());
    }
    for (const auto& st : j.at("states"))
        data.states.push_back(detail::parse_matrix(st, path));
    return data;
}

inline void write_trajectory_file(const std::string& path, const DensityTrajectory& traj) {
    std::string s = "{\n  \"times\": [";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (k) s += ", ";
        s += detail::fmt_double(traj.times[k]);
    }
    s += "],\n  \"states\": [\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        s += "    ";
        detail::append_matrix_object(s, traj.states[k].mat, "    ");
        s += (k + 1 < traj.states.size()) ? ",\n" : "\n";
    }
    s += "  ]\n}\n";
    detail::write_text_file(path, s);
}

inline KrausSet read_kraus_file(const std::string& path) {
    nlohmann::json j = detail::read_json_file(path);
    if (j.is_object() && j.contains("kraus")) j = j.at("kraus");  // unwrap own files
    if (!j.is_object() || !j.contains("dim") || !j.contains("operators"))
        throw Error(errc::parse_error, path + ": expected {dim, operators}");
    KrausSet ks;
    ks.dim = j.at("dim").get<std::size_t>();
    ks.label = j.value("label", std::string{});
    for (const auto& op : j.at("operators")) {
        ComplexMatrix m = detail::parse_matrix(op, path);
        if (m.rows() != ks.dim)
            throw Error(errc::parse_error, path + ": operator dimension != dim");
        ks.ops.push_back(std::move(m));
    }
    if (ks.ops.empty()) throw Error(errc::parse_error, path + ": empty operator list");
    return ks;
}

inline void write_kraus_file(const std::string& path, const KrausSet& ks,
                             const KrausVerifyReport& rep, double tol_used) {
    std::string s = "{\n  \"tol\": " + detail::fmt_double(tol_used) + ",\n  \"kraus\": ";
    detail::append_kraus_object(s, ks, rep, "  ");
    s += "\n}\n";
    detail::write_text_file(path, s);
}

inline void write_verify_report_file(const std::string& path, const KrausVerifyReport& rep,
                                     double tol_used) {
    std::string s = "{\n  \"tol\": " + detail::fmt_double(tol_used) + ",\n  \"report\": ";
    detail::append_kraus_report(s, rep, "  ");
    s += "\n}\n";
    detail::write_text_file(path, s);
}

inline void write_kraus_trajectory_file(const std::string& path, const KrausTrajectory& kt,
                                        const std::vector<KrausVerifyReport>& reports,
                                        double tol_used) {
    std::string s = "{\n  \"tol\": " + detail::fmt_double(tol_used) + ",\n  \"times\": [";
    for (std::size_t k = 0; k < kt.times.size(); ++k) {
        if (k) s += ", ";
        s += detail::fmt_double(kt.times[k]);
    }
    s += "],\n  \"sets\": [\n";
    for (std::size_t k = 0; k < kt.sets.size(); ++k) {
        s += "    ";
        detail::append_kraus_object(s, kt.sets[k], reports[k], "    ");
        s += (k + 1 < kt.sets.size()) ? ",\n" : "\n";
    }
    s += "  ]\n}\n";
    detail::write_text_file(path, s);
}

inline void write_dilation_file(const std::string& path, const DilationUnitary& du,
                                const ComplexMatrix& matrix, const std::string& basis,
                                const DilationVerifyReport& rep, double tol_used) {
    std::string s = "{\n";
    s += "  \"tol\": " + detail::fmt_double(tol_used) + ",\n";
    s += "  \"system_dim\": " + std::to_string(du.system_dim) + ",\n";
    s += "  \"ancilla_dim\": " + std::to_string(du.ancilla_dim) + ",\n";
    s += "  \"basis\": \"" + basis + "\",\n";
    s += "  \"basis_note\": \"" + du.basis_note + "\",\n";
    s += "  \"matrix\": ";
    detail::append_matrix_rows(s, matrix, "  ");
    s += ",\n  \"report\": {\n";
    s += "    \"unitarity_defect\": " + detail::fmt_double(rep.unitarity_defect) + ",\n";
    s += "    \"recovery_defect\": " + detail::fmt_double(rep.recovery_defect) + ",\n";
    s += "    \"pass\": " + std::string(rep.pass ? "true" : "false") + "\n  }\n}\n";
    detail::write_text_file(path, s);
}

inline void write_phase_file(const std::string& path, const PhaseReport& rep,
                             double tol_used, double max_completeness_defect,
                             double max_reconstruction_defect) {
    std::string s = "{\n";
    s += "  \"tol\": " + detail::fmt_double(tol_used) + ",\n";
    s += "  \"aligned\": " + std::string(rep.aligned ? "true" : "false") + ",\n";
    s += "  \"max_completeness_defect\": " + detail::fmt_double(max_completeness_defect) +
         ",\n";
    s += "  \"max_reconstruction_defect\": " +
         detail::fmt_double(max_reconstruction_defect) + ",\n";
    s += "  \"phases\": [\n";
    for (std::size_t mu = 0; mu < rep.phases.size(); ++mu) {
        const PhaseEntry& e = rep.phases[mu];
        s += "    {\"mu\": " + std::to_string(mu) +
             ", \"alpha\": " + detail::fmt_double(e.alpha) +
             ", \"magnitude\": " + detail::fmt_double(e.magnitude) +
             ", \"defined\": " + (e.defined ? "true" : "false") + "}";
        s += (mu + 1 < rep.phases.size()) ? ",\n" : "\n";
    }
    s += "  ],\n  \"transport_residual_max\": [";
    for (std::size_t mu = 0; mu < rep.transport_residual_max.size(); ++mu) {
        if (mu) s += ", ";
        s += detail::fmt_double(rep.transport_residual_max[mu]);
    }
    s += "]\n}\n";
    detail::write_text_file(path, s);
}

}  // namespace krauskit
