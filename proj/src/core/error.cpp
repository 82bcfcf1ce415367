#include "core/error.hpp"

namespace chroma {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::parse: return "parse";
    case Errc::io: return "io";
    case Errc::degenerate_fit: return "degenerate_fit";
    case Errc::degenerate_input: return "degenerate_input";
    case Errc::undefined_metric: return "undefined_metric";
    case Errc::process_failure: return "process_failure";
    case Errc::validation: return "validation";
    }
    return "unknown";
}

} // namespace chroma
