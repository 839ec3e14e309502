#pragma once

#include <stdexcept>
#include <string>

namespace robin {

// Base class for all errors raised by this library. Every failure of a
// documented precondition or invariant throws a subclass of Error; plain
// std::invalid_argument is reserved for API misuse (null sizes etc.).
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- polygon geometry ---
struct TooFewVertices : Error { using Error::Error; };
struct CollinearVertex : Error { using Error::Error; };
struct NotConvex : Error { using Error::Error; };

// --- model spectra ---
struct NonPositiveLength : Error { using Error::Error; };
struct NonPositiveAlpha : Error { using Error::Error; };

// --- variational checks ---
struct AngleOutOfRange : Error { using Error::Error; };
struct FieldNotCompactlySupported : Error { using Error::Error; };
struct InconsistentDecomposition : Error { using Error::Error; };

// --- meshing ---
struct DegenerateSpec : Error { using Error::Error; };
struct MeshQualityFailure : Error { using Error::Error; };
struct InvalidMesh : Error { using Error::Error; };

// --- assembly / solver ---
struct ZeroVector : Error { using Error::Error; };
struct FactorizationFailure : Error { using Error::Error; };
struct NotPositiveDefinite : FactorizationFailure {
    NotPositiveDefinite(const std::string& msg, int pivot_index)
        : FactorizationFailure(msg), pivot(pivot_index) {}
    int pivot;  // index of the first non-positive pivot
};
struct NoConvergence : Error { using Error::Error; };

// --- asymptotics harness ---
struct BracketInvalid : Error { using Error::Error; };
struct DeltaTooLarge : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };

}  // namespace robin
