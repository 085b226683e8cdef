#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdnmc {

enum class ErrorCode {
  // kripke
  EmptyInit,
  WidthMismatch,
  DanglingTransitionEndpoint,
  NonTotalState,
  UnknownState,
  DuplicateState,
  DuplicateAtom,
  // formulas
  SyntaxError,
  UnknownToken,
  UnpairedQuantifier,
  UnboundAtom,
  MissingLoop,
  IndexOutOfRange,
  PropertyHolds,
  WrongShape,
  NotInNnf,
  // sat / bmc
  UnassignedVariable,
  TooManyVariables,
  TooLarge,
  // sdn
  ArityMismatch,
  BadPort,
  BadTableIndex,
  Unreachable,
  UnknownEndpoint,
  UnknownSwitch,
  NoSwitch,
  NoController,
  // io
  ParseError,
  ValidationError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInit: return "EmptyInit";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::DanglingTransitionEndpoint: return "DanglingTransitionEndpoint";
    case ErrorCode::NonTotalState: return "NonTotalState";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::DuplicateState: return "DuplicateState";
    case ErrorCode::DuplicateAtom: return "DuplicateAtom";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::UnpairedQuantifier: return "UnpairedQuantifier";
    case ErrorCode::UnboundAtom: return "UnboundAtom";
    case ErrorCode::MissingLoop: return "MissingLoop";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::PropertyHolds: return "PropertyHolds";
    case ErrorCode::WrongShape: return "WrongShape";
    case ErrorCode::NotInNnf: return "NotInNnf";
    case ErrorCode::UnassignedVariable: return "UnassignedVariable";
    case ErrorCode::TooManyVariables: return "TooManyVariables";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::BadPort: return "BadPort";
    case ErrorCode::BadTableIndex: return "BadTableIndex";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::UnknownSwitch: return "UnknownSwitch";
    case ErrorCode::NoSwitch: return "NoSwitch";
    case ErrorCode::NoController: return "NoController";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sdnmc
