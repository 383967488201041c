#pragma once

#include <stdexcept>
#include <string>

namespace orthotile {

// Error kinds map one-to-one onto CLI exit codes.
enum class ErrorKind { input = 1, generation = 2, solver = 3, verification = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

class GenerationError : public Error {
public:
    explicit GenerationError(const std::string& what) : Error(ErrorKind::generation, what) {}
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual = 0.0)
        : Error(ErrorKind::solver, what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class VerificationError : public Error {
public:
    explicit VerificationError(const std::string& what) : Error(ErrorKind::verification, what) {}
};

}  // namespace orthotile
