#pragma once

#include <stdexcept>
#include <string>

namespace qf {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An isometry was passed to an operation that needs a different class
/// (axis of an elliptic, fixed point of a hyperbolic, ...).
class ClassMismatch : public Error {
public:
    using Error::Error;
};

class ExistenceViolation : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    AssemblyError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class IncomparableError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class RecoveryError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class NoHyperbolicStructure : public Error {
public:
    using Error::Error;
};

class DegenerateSample : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    SchemaError(std::string pointer, const std::string& what)
        : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace qf
