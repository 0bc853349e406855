#pragma once

#include <stdexcept>
#include <string>

namespace qbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimsError : public Error {
public:
    using Error::Error;
};

class NotSquareError : public Error {
public:
    using Error::Error;
};

class NonHermitianError : public Error {
public:
    NonHermitianError(const std::string& what, double violation)
        : Error(what), violation_(violation) {}
    double violation() const noexcept { return violation_; }

private:
    double violation_;
};

class TraceError : public Error {
public:
    TraceError(const std::string& what, double excess) : Error(what), excess_(excess) {}
    /// trace - 1
    double excess() const noexcept { return excess_; }

private:
    double excess_;
};

class NotPSDError : public Error {
public:
    NotPSDError(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

class InvalidOrderError : public Error {
public:
    using Error::Error;
};

/// Raised when a witness is requested for a state whose partial transpose is positive.
class PPTError : public Error {
public:
    PPTError(const std::string& what, double lambda_min) : Error(what), lambda_min_(lambda_min) {}
    double lambda_min() const noexcept { return lambda_min_; }

private:
    double lambda_min_;
};

class DegenerateWitnessError : public Error {
public:
    using Error::Error;
};

/// A witness outside the operator interval [-I, I].
class DomainError : public Error {
public:
    DomainError(const std::string& what, double sup_norm) : Error(what), sup_norm_(sup_norm) {}
    double sup_norm() const noexcept { return sup_norm_; }

private:
    double sup_norm_;
};

class UnsupportedDimsError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace qbound
