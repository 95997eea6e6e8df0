#pragma once

#include <stdexcept>
#include <string>

namespace gcms {

// Precondition violations carry a stable machine-readable code; the CLI maps
// them to exit status 2 and an error object. Anything else is exit 1.
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error(what), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace gcms
