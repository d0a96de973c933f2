#pragma once

#include <stdexcept>
#include <string>

namespace qangle {

// Base of every error raised by the library. Callers that only care about
// "something in qangle rejected the input" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroStateError : public Error {
public:
    ZeroStateError() : Error("cannot normalize an all-zero amplitude vector") {}
};

class GridMismatchError : public Error {
public:
    GridMismatchError() : Error("states live on different grids") {}
};

class NormalizationError : public Error {
public:
    explicit NormalizationError(double norm)
        : Error("state is not normalized (squared norm " + std::to_string(norm) + ")"),
          squared_norm(norm) {}
    double squared_norm;
};

class WraparoundError : public Error {
public:
    explicit WraparoundError(double mass)
        : Error("position mass " + std::to_string(mass) +
                " near the periodic seam; moments would be meaningless"),
          seam_mass(mass) {}
    double seam_mass;
};

class AliasingError : public Error {
public:
    explicit AliasingError(double mass)
        : Error("momentum mass " + std::to_string(mass) +
                " in the top 10% of |p|; state is not resolved by the grid"),
          edge_mass(mass) {}
    double edge_mass;
};

class NonLatticeShiftError : public Error {
public:
    explicit NonLatticeShiftError(double shift)
        : Error("shift " + std::to_string(shift) + " is not a multiple of the grid spacing"),
          shift(shift) {}
    double shift;
};

// A family or grid guard was violated. `guard` names the violated condition.
class ParameterError : public Error {
public:
    explicit ParameterError(std::string guard_name)
        : Error("parameter guard violated: " + guard_name), guard(std::move(guard_name)) {}
    std::string guard;
};

class InitError : public Error {
public:
    explicit InitError(const std::string& why) : Error("invalid search start point: " + why) {}
};

} // namespace qangle
