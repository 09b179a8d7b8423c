#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace saddle {

enum class ErrorKind {
  NotIndefinite,
  NearDegenerate,
  ZeroParameter,
  NotOnCommonHyperbola,
  NotFirstQuadrant,
  ZeroEdgeProduct,
  ExtremumOutsideEdge,
  DegenerateTriangle,
  DeviationOutOfRange,
  SlackOutOfRange,
  UnrealizableProducts,
  InvalidParameter,
  InvalidEpsilon,
  OutOfRange,
  IdenticalCenters,
  DegenerateBase,
  WindowTooLarge,
  OutsideWindow,
  WindowExceeded,
  UnsupportedFormat,
  ParseError,
};

std::string_view error_kind_name(ErrorKind kind);

// Single exception type for domain failures; `kind()` is the machine-readable part.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotIndefinite: return "NotIndefinite";
    case ErrorKind::NearDegenerate: return "NearDegenerate";
    case ErrorKind::ZeroParameter: return "ZeroParameter";
    case ErrorKind::NotOnCommonHyperbola: return "NotOnCommonHyperbola";
    case ErrorKind::NotFirstQuadrant: return "NotFirstQuadrant";
    case ErrorKind::ZeroEdgeProduct: return "ZeroEdgeProduct";
    case ErrorKind::ExtremumOutsideEdge: return "ExtremumOutsideEdge";
    case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorKind::DeviationOutOfRange: return "DeviationOutOfRange";
    case ErrorKind::SlackOutOfRange: return "SlackOutOfRange";
    case ErrorKind::UnrealizableProducts: return "UnrealizableProducts";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::IdenticalCenters: return "IdenticalCenters";
    case ErrorKind::DegenerateBase: return "DegenerateBase";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::OutsideWindow: return "OutsideWindow";
    case ErrorKind::WindowExceeded: return "WindowExceeded";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace saddle
