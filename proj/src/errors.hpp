#pragma once

#include <stdexcept>
#include <string>

namespace renskog {

enum class ErrorCode {
    invalid_input,
    domain,
    smallness_violated,
    no_convergence,
    io,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& msg) : Error(ErrorCode::invalid_input, msg) {}
};

// Geometry outside the operation's domain (omega not in S+2, degenerate g = 0, ...).
struct DomainViolation : Error {
    explicit DomainViolation(const std::string& msg) : Error(ErrorCode::domain, msg) {}
};

struct SmallnessViolated : Error {
    explicit SmallnessViolated(const std::string& msg) : Error(ErrorCode::smallness_violated, msg) {}
};

struct NoConvergence : Error {
    NoConvergence(const std::string& msg, double measured_ratio)
        : Error(ErrorCode::no_convergence, msg), measured_ratio(measured_ratio) {}
    double measured_ratio;
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(ErrorCode::io, msg) {}
};

} // namespace renskog
