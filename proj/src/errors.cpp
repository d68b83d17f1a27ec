#include "nullshell/errors.hpp"

#include <string>

namespace nullshell {

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
    std::string out;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) out += (i + 1 == expected.size()) ? " or " : ", ";
        out += expected[i];
    }
    return out;
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error("parse error at offset " + std::to_string(offset) + ": expected " +
            join_expected(expected) + ", found " + (found.empty() ? "end of input" : "'" + found + "'")),
      offset_(offset),
      expected_(std::move(expected)) {}

ArityError::ArityError(std::size_t offset, const std::string& function, std::size_t expected,
                       std::size_t got)
    : Error("function '" + function + "' at offset " + std::to_string(offset) + " takes " +
            std::to_string(expected) + " argument(s), got " + std::to_string(got)),
      offset_(offset) {}

UnknownIdentifier::UnknownIdentifier(std::size_t offset, const std::string& name)
    : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      offset_(offset),
      name_(name) {}

}  // namespace nullshell
