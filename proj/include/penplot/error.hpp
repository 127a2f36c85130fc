#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace penplot {

enum class Errc {
  invalid_window,
  invalid_coordinate,
  invalid_pen_code,
  invalid_factor,
  invalid_pen,
  sealed_context,
  frame_nesting,
  invalid_grid,
  non_finite_sample,
  behind_eye,
  page_overflow,
  parse_error,
  missing_init,
  range_error,
  syntax_error,
  not_found,
  validation,
  capacity,
};

std::string_view errc_name(Errc code);

// Single exception type for the library. `position` carries a byte offset
// (DM/PL parser) or a 1-based column (expression parser) when relevant.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(message), code_(code), position_(position) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  Errc code_;
  std::optional<std::size_t> position_;
};

}  // namespace penplot
