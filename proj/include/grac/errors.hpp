#pragma once

#include <stdexcept>
#include <string>

namespace grac {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A site, triangle or stencil left the computational window.
struct OutOfWindow : Error {
    using Error::Error;
};

// An iterative solve did not reach its requested tolerance.
struct SolverFailure : Error {
    using Error::Error;
};

// Quadratic potential weights violate kappa_{j+3} = kappa_j.
struct SymmetryViolation : Error {
    using Error::Error;
};

// Bond-angle evaluation hit a near-zero bond length.
struct DegenerateBond : Error {
    using Error::Error;
};

// The interface band sits too close to the window boundary.
struct TooCloseToBoundary : Error {
    using Error::Error;
};

// An operation requiring a planar interface got a non-planar one.
struct NotPlanar : Error {
    using Error::Error;
};

// A reconstruction assignment was asked for on a partition that
// fails the admissibility assumption.
struct InadmissiblePartition : Error {
    using Error::Error;
};

// The element-sum and site-sum forms of the continuum energy disagree.
struct FormMismatch : Error {
    using Error::Error;
};

// The corrector identity failed beyond tolerance.
struct CorrectorMismatch : Error {
    using Error::Error;
};

// The interface corrector linear system has no solution within
// tolerance; this would falsify the corrector existence lemma for the
// given geometry and is reported loudly.
struct NoCorrector : Error {
    using Error::Error;
};

// The patch-test constraint system has no solution.
struct Infeasible : Error {
    using Error::Error;
};

// Bad or unknown key/value in an experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace grac
