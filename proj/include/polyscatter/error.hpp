#pragma once

#include <stdexcept>
#include <string>

namespace polyscatter {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (z = 0, r = 0, n < 2, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An evaluation path could not certify its accuracy target.
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// Density mass found outside the region where the periodized convolution is exact.
class SupportError : public Error {
public:
    using Error::Error;
};

/// Fixed-point or Krylov iteration failed to reach the residual tolerance.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double kappa, double residual)
        : Error(what), kappa_(kappa), residual_(residual) {}
    double kappa() const noexcept { return kappa_; }
    double residual() const noexcept { return residual_; }

private:
    double kappa_;
    double residual_;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

/// Sweep dataset does not cover the requested frequency band.
class BandCoverageError : public Error {
public:
    using Error::Error;
};

/// One of the two backscattering orientations is absent from a dataset.
class OrientationMissing : public Error {
public:
    using Error::Error;
};

/// Frequency raster misses the essential spectral support of the strength.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Brute-force reference invoked on a grid too large for it.
class SizeGuard : public Error {
public:
    using Error::Error;
};

/// Series reference invoked outside its certified radius.
class RadiusGuard : public Error {
public:
    using Error::Error;
};

/// Configuration or specification failed validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace polyscatter
