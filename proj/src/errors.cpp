#include "gridsample/errors.hpp"

namespace gridsample {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::field_out_of_range: return "FieldOutOfRange";
    case Errc::pole_latitude: return "PoleLatitude";
    case Errc::degenerate_box: return "DegenerateBox";
    case Errc::malformed_row: return "MalformedRow";
    case Errc::missing_column: return "MissingColumn";
    case Errc::unsupported_order: return "UnsupportedOrder";
    case Errc::empty_input: return "EmptyInput";
    case Errc::too_few_points: return "TooFewPoints";
    case Errc::zero_mean_distance: return "ZeroMeanDistance";
    case Errc::non_positive_area: return "NonPositiveArea";
    case Errc::zero_mean_mul: return "ZeroMeanMul";
    case Errc::insufficient_candidates: return "InsufficientCandidates";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::exhausted_candidates: return "ExhaustedCandidates";
    case Errc::non_positive_temperature: return "NonPositiveTemperature";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::degenerate_agreement: return "DegenerateAgreement";
    case Errc::empty_instance: return "EmptyInstance";
    case Errc::bad_argument: return "BadArgument";
    case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

}  // namespace gridsample
