#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cflex {

class Utf8Error : public std::runtime_error {
public:
    Utf8Error(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Decodes a UTF-8 string into code points. Throws Utf8Error on overlong
/// encodings, surrogates, truncated sequences and stray continuation bytes.
std::u32string utf8_decode(std::string_view bytes);

/// Non-throwing variant of utf8_decode.
std::optional<std::u32string> try_utf8_decode(std::string_view bytes);

std::string utf8_encode(char32_t cp);
std::string utf8_encode(std::u32string_view cps);

bool is_valid_utf8(std::string_view bytes);

/// Strips ASCII whitespace (and a trailing CR) from both ends.
std::string_view trim(std::string_view s);

}  // namespace cflex
