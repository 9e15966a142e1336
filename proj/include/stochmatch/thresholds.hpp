#pragma once

#include <cstdint>
#include <string_view>

namespace stochmatch {

enum class EdgeLabel : std::uint8_t { Crucial, NonCrucial, Ignored };

std::string_view to_string(EdgeLabel label);

/// Throws InvalidArgument unless 0 < tau_minus < tau_plus < 1.
void validate_thresholds(double tau_minus, double tau_plus);

/// crucial iff q >= tau_plus, non-crucial iff q <= tau_minus, otherwise ignored.
constexpr EdgeLabel label_for(double q, double tau_minus, double tau_plus) {
  if (q >= tau_plus) return EdgeLabel::Crucial;
  if (q <= tau_minus) return EdgeLabel::NonCrucial;
  return EdgeLabel::Ignored;
}

}  // namespace stochmatch
