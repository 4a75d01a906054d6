#include "wii/error.hpp"

namespace wii {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "usage error";
    case ErrorCode::config: return "config error";
    case ErrorCode::catalog: return "catalog error";
    case ErrorCode::degenerate_signal: return "degenerate-signal error";
    case ErrorCode::format: return "format error";
    case ErrorCode::corruption: return "corruption error";
    case ErrorCode::size: return "size error";
    case ErrorCode::representation: return "representation error";
    case ErrorCode::range: return "range error";
    case ErrorCode::empty_selection: return "empty-selection error";
    case ErrorCode::dimension: return "dimension error";
    case ErrorCode::data: return "data error";
    case ErrorCode::shape: return "shape error";
    case ErrorCode::label: return "label error";
    case ErrorCode::label_mapping: return "label-mapping error";
    case ErrorCode::file: return "file error";
    case ErrorCode::numeric: return "numeric failure";
  }
  return "error";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage:
    case ErrorCode::config:
      return 1;
    case ErrorCode::numeric:
    case ErrorCode::degenerate_signal:
      return 3;
    default:
      return 2;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error with_stage(const Error& e, std::string_view stage) {
  std::string what = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
  return Error(e.code(), "[" + std::string(stage) + "] " + what);
}

}  // namespace wii
