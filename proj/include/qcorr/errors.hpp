// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

// All library failures derive from Error so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidRangeError : Error {
    using Error::Error;
};
struct LengthMismatchError : Error {
    using Error::Error;
};
struct GridTooCoarseError : Error {
    using Error::Error;
};
struct OverflowGuardError : Error {
    using Error::Error;
};
struct NonNormalizedDensityError : Error {
    using Error::Error;
};
struct ZeroStateError : Error {
    using Error::Error;
};
struct EdgeLeakageError : Error {
    using Error::Error;
};
struct GridSpanError : Error {
    using Error::Error;
};
struct UnsupportedPointError : Error {
    using Error::Error;
};
struct CoverageError : Error {
    using Error::Error;
};
struct ScheduleDirectionError : Error {
    using Error::Error;
};
struct InsufficientSamplesError : Error {
    using Error::Error;
};
struct DegenerateDensityError : Error {
    using Error::Error;
};
struct OutOfSupportError : Error {
    using Error::Error;
};
struct UnsupportedPairError : Error {
    using Error::Error;
};

// Convex-combination fit cannot reach the target correlation. Carries the
// requested ratio so callers can report it instead of clamping.
struct InfeasibleCombinationError : Error {
    double ratio;
    InfeasibleCombinationError(const std::string& msg, double r) : Error(msg), ratio(r) {}
};

}  // namespace qcorr
