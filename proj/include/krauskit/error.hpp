#pragma once

#include <stdexcept>
#include <string>

namespace krauskit {

// Failure categories surfaced by the library. The CLI maps these onto its
// exit-code scheme; tests match on them directly.
enum class errc {
    not_hermitian,
    not_unit_trace,
    not_psd,
    no_convergence,
    not_orthonormal,
    completion_failure,
    dimension_mismatch,
    bad_probability_vector,
    not_unitary_mixer,
    output_not_density,
    ambiguous_matching,
    bad_params,
    too_few_samples,
    degenerate_overlap,
    completeness_defect,
    io_failure,
    parse_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_hermitian:          return "NotHermitian";
        case errc::not_unit_trace:         return "NotUnitTrace";
        case errc::not_psd:                return "NotPSD";
        case errc::no_convergence:         return "NoConvergence";
        case errc::not_orthonormal:        return "NotOrthonormal";
        case errc::completion_failure:     return "CompletionFailure";
        case errc::dimension_mismatch:     return "DimensionMismatch";
        case errc::bad_probability_vector: return "BadProbabilityVector";
        case errc::not_unitary_mixer:      return "NotUnitaryMixer";
        case errc::output_not_density:     return "OutputNotDensity";
        case errc::ambiguous_matching:     return "AmbiguousMatching";
        case errc::bad_params:             return "BadParams";
        case errc::too_few_samples:        return "TooFewSamples";
        case errc::degenerate_overlap:     return "DegenerateOverlap";
        case errc::completeness_defect:    return "CompletenessDefect";
        case errc::io_failure:             return "IoFailure";
        case errc::parse_error:            return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
          code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

}  // namespace krauskit
