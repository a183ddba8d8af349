#pragma once

#include <stdexcept>
#include <string>

namespace curr {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad argument: unknown ids, dimension mismatches, malformed input files.
struct InputError : Error {
    using Error::Error;
};

/// Geometric failure: refinement mismatch, unresolvable degeneracy, point off carrier.
struct GeometryError : Error {
    using Error::Error;
};

/// A check was invoked on data that violates its stated hypotheses.
struct HypothesisError : Error {
    using Error::Error;
};

/// Operation outside the supported dimension/configuration range.
struct UnsupportedError : Error {
    using Error::Error;
};

} // namespace curr
