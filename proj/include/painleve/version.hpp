#pragma once

#include <string_view>

namespace painleve {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace painleve
