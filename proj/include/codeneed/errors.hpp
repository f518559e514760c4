#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace codeneed {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input record; carries the 1-based line number.
struct ParseError : Error {
    ParseError(std::size_t line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

struct CorpusError : Error {
    using Error::Error;
};

struct ResourceError : Error {
    using Error::Error;
};

struct SchemaMismatchError : Error {
    using Error::Error;
};

struct ModelIoError : Error {
    using Error::Error;
};

struct StatsError : Error {
    using Error::Error;
};

} // namespace codeneed
