#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wii {

enum class ErrorCode {
  usage,
  config,
  catalog,
  degenerate_signal,
  format,
  corruption,
  size,
  representation,
  range,
  empty_selection,
  dimension,
  data,
  shape,
  label,
  label_mapping,
  file,
  numeric,
};

std::string_view to_string(ErrorCode code);

// Process exit status for the CLI: 1 usage, 2 data/format, 3 numeric failure.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Prefixes the message with the pipeline stage that raised it.
Error with_stage(const Error& e, std::string_view stage);

}  // namespace wii
