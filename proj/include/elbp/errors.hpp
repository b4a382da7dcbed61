#pragma once

#include <stdexcept>
#include <string>

namespace elbp {

// Error taxonomy shared by the library. Everything derives from Error so
// callers can catch broadly; the CLI maps these onto exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// mesh loading / validation
struct ParseError : Error { using Error::Error; };
struct NonManifoldError : Error { using Error::Error; };
struct NonConvexFaceError : Error { using Error::Error; };
struct EmptyMeshError : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct DegenerateNormalError : Error { using Error::Error; };

// curvature
struct DegenerateNeighborhoodError : Error { using Error::Error; };

// ring sampling
struct TangentEdgeError : Error { using Error::Error; };
struct OpenRingError : Error { using Error::Error; };
struct MultiComponentBoundaryError : Error { using Error::Error; };
struct DegenerateRingError : Error { using Error::Error; };

// descriptor / similarity
struct NoAdmissibleVertexError : Error { using Error::Error; };
struct ParamMismatchError : Error { using Error::Error; };

// retrieval evaluation
struct UndefinedForSingletonClassError : Error { using Error::Error; };

// run configuration (CLI maps this to its bad-config exit code)
struct ConfigError : Error { using Error::Error; };

} // namespace elbp
