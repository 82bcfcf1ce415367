#pragma once

#include <stdexcept>
#include <string>

namespace chroma {

enum class Errc {
    invalid_argument,
    dimension_mismatch,
    parse,
    io,
    degenerate_fit,
    degenerate_input,
    undefined_metric,
    process_failure,
    validation,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

class DegenerateFitError : public Error {
public:
    DegenerateFitError(int rank, std::string message)
        : Error(Errc::degenerate_fit, std::move(message)), rank_(rank) {}

    int rank() const { return rank_; }

private:
    int rank_;
};

const char* errc_name(Errc code);

[[noreturn]] inline void fail(Errc code, std::string message) {
    throw Error(code, std::move(message));
}

} // namespace chroma
