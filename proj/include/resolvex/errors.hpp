#pragma once

#include <stdexcept>
#include <string>

namespace resolvex {

// Base class for every failure the library reports deliberately.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& w = "matrix is singular to working precision") : Error(w) {}
};
struct ZeroMatrix : Error {
    explicit ZeroMatrix(const std::string& w = "all singular values below 1e-12") : Error(w) {}
};
struct BadSpec : Error {
    explicit BadSpec(const std::string& w) : Error(w) {}
};
struct ZeroState : Error {
    explicit ZeroState(const std::string& w = "requested superposition has norm below 1e-12") : Error(w) {}
};
struct UnsupportedCurve : Error {
    explicit UnsupportedCurve(const std::string& w) : Error(w) {}
};
struct ContourHitsSpectrum : Error {
    explicit ContourHitsSpectrum(const std::string& w = "sampled contour point hit the spectrum") : Error(w) {}
};
struct SpectrumOnContour : Error {
    explicit SpectrumOnContour(const std::string& w = "grid point within 1e-10 of an eigenvalue") : Error(w) {}
};
struct BoundViolated : Error {
    explicit BoundViolated(const std::string& w) : Error(w) {}
};
struct InfeasibleGrid : Error {
    explicit InfeasibleGrid(const std::string& w) : Error(w) {}
};
struct HypothesisViolated : Error {
    explicit HypothesisViolated(const std::string& w) : Error(w) {}
};
struct CertificateFailed : Error {
    explicit CertificateFailed(const std::string& w) : Error(w) {}
};
struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& w) : Error(w) {}
};
struct ConformanceRequired : Error {
    explicit ConformanceRequired(const std::string& w) : Error(w) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(w) {}
};

} // namespace resolvex
