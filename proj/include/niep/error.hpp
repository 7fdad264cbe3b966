#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace niep {

enum class Errc {
  parse_error,
  size_exceeded,
  degenerate_eigenpair,
  negative_coordinates,
  not_in_cone,
  order_mismatch,
  negative_radicand,
  perron_order_violation,
  not_hadamard_order,
  not_symmetric,
  no_convergence,
  zero_vector,
  dimension_mismatch,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::parse_error: return "parse_error";
    case Errc::size_exceeded: return "size_exceeded";
    case Errc::degenerate_eigenpair: return "degenerate_eigenpair";
    case Errc::negative_coordinates: return "negative_coordinates";
    case Errc::not_in_cone: return "not_in_cone";
    case Errc::order_mismatch: return "order_mismatch";
    case Errc::negative_radicand: return "negative_radicand";
    case Errc::perron_order_violation: return "perron_order_violation";
    case Errc::not_hadamard_order: return "not_hadamard_order";
    case Errc::not_symmetric: return "not_symmetric";
    case Errc::no_convergence: return "no_convergence";
    case Errc::zero_vector: return "zero_vector";
    case Errc::dimension_mismatch: return "dimension_mismatch";
  }
  return "unknown";
}

/// Exception carrying one of the library's error codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace niep
