#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dartree {

enum class ErrorKind {
  // trees
  MultipleRoots,
  OrphanVertex,
  CycleDetected,
  DuplicateVertexId,
  LeafBeforeTruncation,
  BranchingBeyondIndexBound,
  VertexBeyondTruncation,
  InvalidParameter,
  // product
  DepthBoundExceedsFactor,
  RootHasNoParent,
  VertexNotInPhiF,
  VertexNotEnumerated,
  // multishift
  TruncationOverflow,
  NotLeftInvertible,
  NonRationalScaling,
  // cokernel
  EmptyF,
  DepthTooShallow,
  EmptyBlock,
  // model
  PointOutsideDomain,
  WrongRegime,
  // classify
  FactorCountMismatch,
  NotIsomorphic,
  TruncationTooShallow,
  // io
  MalformedInput,
};

constexpr std::string_view to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::MultipleRoots: return "MultipleRoots";
    case ErrorKind::OrphanVertex: return "OrphanVertex";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::DuplicateVertexId: return "DuplicateVertexId";
    case ErrorKind::LeafBeforeTruncation: return "LeafBeforeTruncation";
    case ErrorKind::BranchingBeyondIndexBound: return "BranchingBeyondIndexBound";
    case ErrorKind::VertexBeyondTruncation: return "VertexBeyondTruncation";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DepthBoundExceedsFactor: return "DepthBoundExceedsFactor";
    case ErrorKind::RootHasNoParent: return "RootHasNoParent";
    case ErrorKind::VertexNotInPhiF: return "VertexNotInPhiF";
    case ErrorKind::VertexNotEnumerated: return "VertexNotEnumerated";
    case ErrorKind::TruncationOverflow: return "TruncationOverflow";
    case ErrorKind::NotLeftInvertible: return "NotLeftInvertible";
    case ErrorKind::NonRationalScaling: return "NonRationalScaling";
    case ErrorKind::EmptyF: return "EmptyF";
    case ErrorKind::DepthTooShallow: return "DepthTooShallow";
    case ErrorKind::EmptyBlock: return "EmptyBlock";
    case ErrorKind::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorKind::WrongRegime: return "WrongRegime";
    case ErrorKind::FactorCountMismatch: return "FactorCountMismatch";
    case ErrorKind::NotIsomorphic: return "NotIsomorphic";
    case ErrorKind::TruncationTooShallow: return "TruncationTooShallow";
    case ErrorKind::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (and the
/// CLI) can report which invariant was violated without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace dartree
