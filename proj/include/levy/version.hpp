#pragma once

#include <string_view>

#ifndef LEVY_SCHEMES_VERSION
#define LEVY_SCHEMES_VERSION "0.1.0"
#endif

namespace levy {

/// git-describe style version string recorded in output metadata.
inline constexpr std::string_view kVersion = LEVY_SCHEMES_VERSION;

}  // namespace levy
