#include "pitchlog/error.hpp"

#include <utility>

namespace pitchlog {

namespace {

std::string format_parse_message(const std::string& source, std::size_t line, const std::string& what) {
    std::string msg = source.empty() ? std::string("<input>") : source;
    if (line > 0) {
        msg += ":" + std::to_string(line);
    }
    return msg + ": " + what;
}

} // namespace

ParseError::ParseError(std::string source, std::size_t line, const std::string& what)
    : Error(format_parse_message(source, line, what)), source_(std::move(source)), line_(line) {}

} // namespace pitchlog
