#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nullshell {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class SingularMetric : public Error {
public:
    using Error::Error;
};

class SingularLeafMetric : public Error {
public:
    using Error::Error;
};

class InsufficientOrder : public Error {
public:
    using Error::Error;
};

class NonPositiveDerivative : public Error {
public:
    using Error::Error;
};

class ConformalFactorZero : public Error {
public:
    using Error::Error;
};

class ConstraintViolation : public Error {
public:
    explicit ConstraintViolation(std::string inequality)
        : Error("constraint violated: " + inequality), inequality_(std::move(inequality)) {}

    const std::string& inequality() const noexcept { return inequality_; }

private:
    std::string inequality_;
};

class StepSizeError : public Error {
public:
    using Error::Error;
};

class WrongDimension : public Error {
public:
    using Error::Error;
};

class NotWaveType : public Error {
public:
    using Error::Error;
};

class NotTransversal : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class ArityError : public Error {
public:
    ArityError(std::size_t offset, const std::string& function, std::size_t expected, std::size_t got);

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t offset, const std::string& name);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::size_t offset_;
    std::string name_;
};

}  // namespace nullshell
