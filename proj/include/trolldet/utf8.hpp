#pragma once

// Minimal UTF-8 handling for forum text: codepoint iteration, letter/digit
// classification and case mapping for the script ranges that actually occur
// in the corpus (ASCII, Latin-1/Ext-A, Greek, Cyrillic incl. the Bulgarian
// grave-accent letters). Codepoints outside these ranges pass through with
// identity case and non-letter classification.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace trolldet::utf8 {

struct Decoded {
    char32_t cp;
    int len;  // bytes consumed, >= 1 even for malformed input
};

// Decodes the codepoint starting at byte i. Malformed sequences decode as
// U+FFFD one byte at a time so iteration always makes progress.
inline Decoded decode(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return {b0, 1};
    auto cont = [&](std::size_t k) {
        return i + k < s.size() &&
               (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    auto cb = [&](std::size_t k) {
        return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F);
    };
    if ((b0 & 0xE0) == 0xC0 && cont(1))
        return {(static_cast<char32_t>(b0 & 0x1F) << 6) | cb(1), 2};
    if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2))
        return {(static_cast<char32_t>(b0 & 0x0F) << 12) | (cb(1) << 6) | cb(2), 3};
    if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3))
        return {(static_cast<char32_t>(b0 & 0x07) << 18) | (cb(1) << 12) |
                    (cb(2) << 6) | cb(3),
                4};
    return {0xFFFD, 1};
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::vector<char32_t> decode_all(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        auto d = decode(s, i);
        out.push_back(d.cp);
        i += d.len;
    }
    return out;
}

// Codepoint count (bytes that are not UTF-8 continuation bytes).
inline std::size_t length(std::string_view s) {
    std::size_t n = 0;
    for (char c : s)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    return n;
}

inline bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

inline bool is_letter(char32_t c) {
    if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
    if (c >= 0xC0 && c <= 0x24F) return c != 0xD7 && c != 0xF7;  // Latin-1..Ext-B
    if (c >= 0x386 && c <= 0x3FF) return c != 0x387;             // Greek
    if (c >= 0x400 && c <= 0x52F) return true;                   // Cyrillic
    return false;
}

inline bool is_alnum(char32_t c) { return is_letter(c) || is_digit(c); }

inline char32_t to_lower(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 0x20;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;    // Latin-1
    if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 0x20; // Greek
    if (c >= 0x410 && c <= 0x42F) return c + 0x20;               // Cyrillic А..Я
    if (c >= 0x400 && c <= 0x40F) return c + 0x50;               // Ѐ..Џ
    return c;
}

// True for cased letters currently in uppercase form.
inline bool is_upper(char32_t c) { return is_letter(c) && to_lower(c) != c; }

inline std::string lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        auto d = decode(s, i);
        append(out, to_lower(d.cp));
        i += d.len;
    }
    return out;
}

}  // namespace trolldet::utf8
