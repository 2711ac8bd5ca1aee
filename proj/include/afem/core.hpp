#ifndef AFEM_CORE_HPP
#define AFEM_CORE_HPP

#include <stdexcept>
#include <string>

namespace afem {

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluating data that belongs to an older mesh generation.
class StaleDataError : public Error {
public:
    using Error::Error;
};

// Inconsistent array or matrix dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Requesting an edge trace of a function that is discontinuous across edges.
class NoEdgeTraceError : public Error {
public:
    using Error::Error;
};

} // namespace afem

#endif
