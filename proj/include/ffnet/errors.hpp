#pragma once

#include <stdexcept>
#include <string>

namespace ffnet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or entries of a network that do not fit together.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// An estimate was requested from a set of agents that carries no information.
class NoInformationError : public Error {
public:
    using Error::Error;
};

/// A caller broke a documented precondition (e.g. a weight row that does not sum to one).
class ContractViolation : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Layer, agent or size parameter outside its admissible range.
class RangeError : public Error {
public:
    using Error::Error;
};

} // namespace ffnet
