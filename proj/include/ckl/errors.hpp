#pragma once

#include <stdexcept>
#include <string>

namespace ckl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};
struct SingularityError : Error {
    using Error::Error;
};
struct DegenerateError : Error {
    using Error::Error;
};
struct NoConvergenceError : Error {
    using Error::Error;
};
struct SingularJacobianError : Error {
    using Error::Error;
};
struct EmptyFamilyError : Error {
    using Error::Error;
};
struct MemoryBudgetError : Error {
    using Error::Error;
};
struct DegenerateFitError : Error {
    using Error::Error;
};
struct PreconditionError : Error {
    using Error::Error;
};
struct ZeroPolynomialError : Error {
    using Error::Error;
};
struct NyquistError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

} // namespace ckl
