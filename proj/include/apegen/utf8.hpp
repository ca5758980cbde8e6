#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace apegen::utf8 {

// Strict validation: rejects overlong forms, surrogates and code points above
// U+10FFFF.
bool is_valid(std::string_view text);

// Number of code points; assumes valid input.
std::size_t length(std::string_view text);

// ASCII-only case mapping. Non-ASCII bytes pass through untouched.
std::string to_lower(std::string_view text);
std::string to_upper(std::string_view text);

}  // namespace apegen::utf8
