#pragma once

#include <stdexcept>
#include <string>

namespace omrouter {

// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error
{
public:
    using Error::Error;
};

// Response evaluated at a point where the linear response is singular.
class SingularPoint : public Error
{
public:
    explicit SingularPoint(const std::string &what, double condition = 0.0)
        : Error(what), condition_(condition)
    {
    }
    // Reciprocal condition estimate of the failing system (0 when not available).
    double condition() const { return condition_; }

private:
    double condition_;
};

class ConvergenceError : public Error
{
public:
    using Error::Error;
};

// Internal invariant violated (e.g. the root scan lost its bracket).
class InternalError : public Error
{
public:
    using Error::Error;
};

class AnalysisError : public Error
{
public:
    using Error::Error;
};

class CalibrationError : public Error
{
public:
    using Error::Error;
};

} // namespace omrouter
