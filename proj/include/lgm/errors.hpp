#pragma once

#include <stdexcept>
#include <string>

namespace lgm {

// Root of the library's error hierarchy. Every throw below carries a
// human-readable message; types exist so callers can catch precisely.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- network -------------------------------------------------------------

struct NonSquare : Error {
    using Error::Error;
};

struct MissingSelfLoop : Error {
    explicit MissingSelfLoop(int user_)
        : Error("adjacency diagonal must be 1: user " + std::to_string(user_) +
                " does not affect itself"),
          user(user_) {}
    int user;
};

struct CycleTooSmall : Error {
    CycleTooSmall(int good_, int size_)
        : Error("column support of good " + std::to_string(good_) + " has " +
                std::to_string(size_) + " member(s), need at least 3"),
          good(good_), size(size_) {}
    int good;
    int size;
};

struct NotInCycle : Error {
    NotInCycle(int user_, int good_)
        : Error("user " + std::to_string(user_) + " is not in the cycle of good " +
                std::to_string(good_)),
          user(user_), good(good_) {}
    int user;
    int good;
};

// ---- utilities -----------------------------------------------------------

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NotDifferentiableAt : Error {
    using Error::Error;
};

struct NonConcaveUtility : Error {
    using Error::Error;
};

// ---- ne ------------------------------------------------------------------

struct KKTNotSatisfied : Error {
    using Error::Error;
};

struct InconsistentColumn : Error {
    InconsistentColumn(int good_, double sum_)
        : Error("price column of good " + std::to_string(good_) +
                " does not sum to zero (sum = " + std::to_string(sum_) + ")"),
          good(good_), sum(sum_) {}
    int good;
    double sum;
};

// ---- dynamics ------------------------------------------------------------

struct InnerNotConverged : Error {
    using Error::Error;
};

// ---- cli -----------------------------------------------------------------

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

}  // namespace lgm
