#pragma once

#include <stdexcept>
#include <string>

namespace wrinkle {

enum class ErrorKind {
    domain,           // point outside the domain, invalid shape
    ambiguity,        // non-unique nearest boundary point
    not_implemented,  // no closed form for this shape
    resolution,       // grid or sample count too small
    parameter,        // invalid numeric parameter
    unsupported,      // e.g. mixed-sign curvature
    consistency,      // mismatched inputs
    lookup,           // point not covered by a line family
    data,             // invalid or missing data
    degenerate,       // degenerate line or geometry
    wrong_data,       // wrong boundary data kind for a line
    regime,           // parameters outside the validity regime
    config,           // malformed configuration
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace wrinkle
