#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace grft {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// World axes. E3 points up, away from the granular bed.
inline const Vec3 kE1 = Vec3::UnitX();
inline const Vec3 kE2 = Vec3::UnitY();
inline const Vec3 kE3 = Vec3::UnitZ();

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a model function (angles, depths).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or missing input file content.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration or parameter set.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Failure while running the model (no contact, degenerate geometry).
class SimulationError : public Error {
public:
    using Error::Error;
};

/// Least-squares fit could not produce a usable parameter set.
class CalibrationError : public Error {
public:
    using Error::Error;
};

inline double sign(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace grft
