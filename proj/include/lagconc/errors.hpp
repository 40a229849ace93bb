#pragma once

#include <stdexcept>
#include <string>

namespace lagconc {

enum class ErrorKind {
  InvalidArgument,
  AreaTooSmall,
  AnchorCollision,
  NonGenericIntersection,
  DegenerateSegment,
  NotTransverse,
  EtaSingular,
  NotLagrangian,
  FormNotPreserved,
  BandTooNarrow,
  CuspResolutionFailure,
  BoundaryNotCylindrical,
  Infeasible,
  ProjectionMismatch,
  InsufficientExtension,
  NonUniformSampling,
  TrackingGap,
  InconsistentDiagram,
  UndefinedPeripheral,
  NotKnotLike,
  ParseError,
  MissingArtifact,
  UnknownKind,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::AreaTooSmall: return "AreaTooSmall";
    case ErrorKind::AnchorCollision: return "AnchorCollision";
    case ErrorKind::NonGenericIntersection: return "NonGenericIntersection";
    case ErrorKind::DegenerateSegment: return "DegenerateSegment";
    case ErrorKind::NotTransverse: return "NotTransverse";
    case ErrorKind::EtaSingular: return "EtaSingular";
    case ErrorKind::NotLagrangian: return "NotLagrangian";
    case ErrorKind::FormNotPreserved: return "FormNotPreserved";
    case ErrorKind::BandTooNarrow: return "BandTooNarrow";
    case ErrorKind::CuspResolutionFailure: return "CuspResolutionFailure";
    case ErrorKind::BoundaryNotCylindrical: return "BoundaryNotCylindrical";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::ProjectionMismatch: return "ProjectionMismatch";
    case ErrorKind::InsufficientExtension: return "InsufficientExtension";
    case ErrorKind::NonUniformSampling: return "NonUniformSampling";
    case ErrorKind::TrackingGap: return "TrackingGap";
    case ErrorKind::InconsistentDiagram: return "InconsistentDiagram";
    case ErrorKind::UndefinedPeripheral: return "UndefinedPeripheral";
    case ErrorKind::NotKnotLike: return "NotKnotLike";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingArtifact: return "MissingArtifact";
    case ErrorKind::UnknownKind: return "UnknownKind";
  }
  return "Unknown";
}

/// Every library failure is reported as an Error carrying a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace lagconc
