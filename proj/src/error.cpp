#include "wrinkle/error.hpp"

namespace wrinkle {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::domain: return "domain error";
        case ErrorKind::ambiguity: return "ambiguity error";
        case ErrorKind::not_implemented: return "not implemented";
        case ErrorKind::resolution: return "resolution error";
        case ErrorKind::parameter: return "parameter error";
        case ErrorKind::unsupported: return "unsupported";
        case ErrorKind::consistency: return "consistency error";
        case ErrorKind::lookup: return "lookup error";
        case ErrorKind::data: return "data error";
        case ErrorKind::degenerate: return "degenerate line";
        case ErrorKind::wrong_data: return "wrong data kind";
        case ErrorKind::regime: return "regime error";
        case ErrorKind::config: return "configuration error";
    }
    return "error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace wrinkle
