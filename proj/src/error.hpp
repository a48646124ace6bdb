#pragma once

#include <stdexcept>
#include <string>

namespace airs {

// Fine-grained error identities. Coarse classes (for the C API status and
// CLI exit codes) are derived via category().
enum class Errc {
    // I/O
    file_not_found,
    io_failure,
    // validation
    malformed_record,
    unknown_joint_set,
    non_monotonic_timestamps,
    unsupported_format,
    empty_cloud,
    degenerate_footprint,
    no_convergence,
    empty_input,
    empty_mask,
    resolution_mismatch,
    unknown_joint,
    zero_length_ray,
    triple_mismatch,
    band_too_narrow,
    missing_input,
    unparseable_verdict,
    dim_mismatch,
    zero_vector,
    invalid_counts,
    impossible_geometry,
    start_occupied,
    goal_occupied,
    invalid_config,
    // no solution
    no_placement,
    no_path,
    // transport
    transport_error,
    replay_miss,
    rate_limited,
    // misuse of the API itself
    usage,
};

enum class ErrorClass { usage, io, validation, no_solution, transport };

constexpr ErrorClass category(Errc c) {
    switch (c) {
    case Errc::file_not_found:
    case Errc::io_failure:
        return ErrorClass::io;
    case Errc::no_placement:
    case Errc::no_path:
        return ErrorClass::no_solution;
    case Errc::transport_error:
    case Errc::replay_miss:
    case Errc::rate_limited:
        return ErrorClass::transport;
    case Errc::usage:
        return ErrorClass::usage;
    default:
        return ErrorClass::validation;
    }
}

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const noexcept { return code_; }
    ErrorClass error_class() const noexcept { return category(code_); }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace airs
