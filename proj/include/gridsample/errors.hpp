#pragma once

#include <stdexcept>
#include <string>

namespace gridsample {

// Every failure mode the library reports. Tests assert on the code, not
// the message text.
enum class Errc {
    duplicate_id,
    field_out_of_range,
    pole_latitude,
    degenerate_box,
    malformed_row,
    missing_column,
    unsupported_order,
    empty_input,
    too_few_points,
    zero_mean_distance,
    non_positive_area,
    zero_mean_mul,
    insufficient_candidates,
    too_few_samples,
    exhausted_candidates,
    non_positive_temperature,
    shape_mismatch,
    degenerate_agreement,
    empty_instance,
    bad_argument,
    io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace gridsample
