#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace helmfd {

using Real = double;
using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidIndexError : public Error {
public:
  using Error::Error;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

class GeometryError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class ResourceError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

// Boundary condition attached to one side of the rectangle.
enum class BoundaryKind { Dirichlet, Neumann, Impedance };

// Gamma_1 (x=l1), Gamma_2 (x=l2), Gamma_3 (y=l3), Gamma_4 (y=l4).
enum class Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };

enum class Corner { BottomLeft, BottomRight, TopLeft, TopRight };

inline std::string to_string(BoundaryKind b) {
  switch (b) {
  case BoundaryKind::Dirichlet: return "dirichlet";
  case BoundaryKind::Neumann: return "neumann";
  case BoundaryKind::Impedance: return "impedance";
  }
  return "?";
}

inline std::string to_string(Side s) {
  switch (s) {
  case Side::Left: return "left";
  case Side::Right: return "right";
  case Side::Bottom: return "bottom";
  case Side::Top: return "top";
  }
  return "?";
}

inline std::string to_string(Corner c) {
  switch (c) {
  case Corner::BottomLeft: return "bottom-left";
  case Corner::BottomRight: return "bottom-right";
  case Corner::TopLeft: return "top-left";
  case Corner::TopRight: return "top-right";
  }
  return "?";
}

} // namespace helmfd
