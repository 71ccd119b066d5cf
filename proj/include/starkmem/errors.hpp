#pragma once

#include <stdexcept>
#include <string>

namespace starkmem {

/// Base for every error raised by the library. The CLI maps the two
/// families below onto its exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files (CSV tables, field text files).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Physics-domain failures: inputs outside the regime where a model holds.
class PhysicsError : public Error {
public:
    using Error::Error;
};

/// The requested compensation cannot be realized by a physical beam.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class NearResonance : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class DivisionNearZero : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class LifetimeNotReached : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class DomainError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class GridMismatch : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class TargetInfeasible : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class FieldOutOfRange : public InfeasibleError {
public:
    using InfeasibleError::InfeasibleError;
};

class NonPhysicalProfile : public InfeasibleError {
public:
    using InfeasibleError::InfeasibleError;
};

}  // namespace starkmem
