#ifndef HYBRIDQ_ERROR_HPP
#define HYBRIDQ_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hybridq {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical or numerical input outside the admissible domain.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// C_n^- normalization with a vanishing norm (coincident centers).
class DegenerateBasisError : public Error {
public:
    using Error::Error;
};

/// Overlap matrix numerically singular, or Cholesky breakdown.
class IllConditionedBasisError : public Error {
public:
    IllConditionedBasisError(const std::string& what, double eigenvalue)
        : Error(what), eigenvalue_(eigenvalue) {}
    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace hybridq

#endif // HYBRIDQ_ERROR_HPP
