#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "thdas/sample.hpp"

namespace thdas {

/// "YYYY-MM-DDTHH:MM:SS.mmmZ"
std::string format_timestamp(Timestamp t);

/// Accepts "YYYY-MM-DDTHH:MM:SS[.fff]Z"; fractional digits beyond
/// milliseconds are rejected.
std::optional<Timestamp> parse_timestamp(std::string_view text);

Timestamp now_utc();

}  // namespace thdas
