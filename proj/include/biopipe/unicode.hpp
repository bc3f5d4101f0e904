// Copyright 2026 The Biopipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BIOPIPE_UNICODE_HPP_
#define BIOPIPE_UNICODE_HPP_

#include <string>
#include <string_view>

namespace biopipe {

// Decodes UTF-8 into Unicode scalar values. Throws InputError on malformed
// sequences, overlong forms, surrogates, and values above U+10FFFF.
std::u32string utf8_decode(std::string_view bytes);

std::string utf8_encode(std::u32string_view text);
std::string utf8_encode(char32_t c);

// True when the bytes form valid UTF-8.
bool utf8_valid(std::string_view bytes);

// Number of scalar values in a valid UTF-8 string.
std::size_t utf8_length(std::string_view bytes);

bool is_space(char32_t c);
bool has_space(std::u32string_view text);

// Simple case mapping for Latin, Greek, and Cyrillic blocks. Characters
// outside those blocks map to themselves.
char32_t to_lower(char32_t c);
std::u32string to_lower(std::u32string_view text);
std::string to_lower_utf8(std::string_view text);

}  // namespace biopipe

#endif  // BIOPIPE_UNICODE_HPP_
