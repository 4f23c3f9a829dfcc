#ifndef NETSUP_ERRORS_HPP
#define NETSUP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace netsup {

enum class ErrorCode {
    EMPTY_LIST,
    MALFORMED_AUTOMATON,
    UNKNOWN_EVENT,
    INVALID_CAPACITY,
    INVALID_PARAMS,
    CONSTRAINT_VIOLATION,
    LIMIT_EXCEEDED,
    MISSING_ANNOTATIONS,
    ALPHABET_CONFLICT,
    PARSE_ERROR,
    IO_ERROR,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::EMPTY_LIST: return "EMPTY_LIST";
        case ErrorCode::MALFORMED_AUTOMATON: return "MALFORMED_AUTOMATON";
        case ErrorCode::UNKNOWN_EVENT: return "UNKNOWN_EVENT";
        case ErrorCode::INVALID_CAPACITY: return "INVALID_CAPACITY";
        case ErrorCode::INVALID_PARAMS: return "INVALID_PARAMS";
        case ErrorCode::CONSTRAINT_VIOLATION: return "CONSTRAINT_VIOLATION";
        case ErrorCode::LIMIT_EXCEEDED: return "LIMIT_EXCEEDED";
        case ErrorCode::MISSING_ANNOTATIONS: return "MISSING_ANNOTATIONS";
        case ErrorCode::ALPHABET_CONFLICT: return "ALPHABET_CONFLICT";
        case ErrorCode::PARSE_ERROR: return "PARSE_ERROR";
        case ErrorCode::IO_ERROR: return "IO_ERROR";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace netsup

#endif
