#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edutainer {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyMeshError : public Error {
public:
    using Error::Error;
};

// Configuration violation; `field` is a path such as "structures[1].hue".
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class DegenerateSelection : public Error {
public:
    using Error::Error;
};

// Net does not fit the page at the requested scale.
class LayoutError : public Error {
public:
    LayoutError(double required_scale, const std::string& what)
        : Error(what), required_scale_(required_scale) {}
    double required_scale() const noexcept { return required_scale_; }

private:
    double required_scale_;
};

class UnfoldError : public Error {
public:
    using Error::Error;
};

// Broken internal contract (e.g. unsorted fragment list).
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace edutainer
