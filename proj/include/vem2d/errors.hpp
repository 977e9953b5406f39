#pragma once

#include <stdexcept>
#include <string>

namespace vem2d {

/// Malformed input files, unreadable/unwritable paths, bad CLI arguments.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input data violating a documented contract (geometry, mesh, material, loads).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Failures of the numerics: singular or ill-conditioned systems, solver divergence.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace vem2d
