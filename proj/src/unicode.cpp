#include "edstop/unicode.hpp"

#include <stdexcept>
#include <string>

namespace edstop::uni {

namespace {

[[noreturn]] void bad_utf8(std::size_t offset) {
    throw std::runtime_error("invalid UTF-8 at byte offset " + std::to_string(offset));
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        std::size_t n = 0;
        if (b0 < 0x80) {
            cp = b0;
            n = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1Fu;
            n = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0Fu;
            n = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07u;
            n = 4;
        } else {
            bad_utf8(i);
        }
        if (i + n > s.size()) bad_utf8(i);
        for (std::size_t k = 1; k < n; ++k) {
            const auto b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) bad_utf8(i);
            cp = (cp << 6) | (b & 0x3Fu);
        }
        static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (n > 1 && cp < kMin[n]) bad_utf8(i);
        if (cp >= 0xD800 && cp <= 0xDFFF) bad_utf8(i);
        if (cp > 0x10FFFF) bad_utf8(i);
        out.push_back(cp);
        i += n;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
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

std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size() * 2);
    for (char32_t cp : s) append_utf8(out, cp);
    return out;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_digit(char32_t cp) {
    return (cp >= '0' && cp <= '9') ||
           (cp >= 0x0660 && cp <= 0x0669) ||   // Arabic-Indic
           (cp >= 0x06F0 && cp <= 0x06F9);     // extended Arabic-Indic
}

bool is_arabic_diacritic(char32_t cp) {
    return (cp >= 0x064B && cp <= 0x0652) || cp == 0x0670;
}

bool is_arabic_letter(char32_t cp) {
    return (cp >= 0x0620 && cp <= 0x063F) ||
           (cp >= 0x0641 && cp <= 0x064A) ||
           (cp >= 0x066E && cp <= 0x066F) ||
           (cp >= 0x0671 && cp <= 0x06D3) ||
           cp == 0x06D5 ||
           (cp >= 0x06EE && cp <= 0x06EF) ||
           (cp >= 0x06FA && cp <= 0x06FF) ||
           (cp >= 0x0750 && cp <= 0x077F);
}

bool is_letter(char32_t cp) {
    if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return true;
    if (cp < 0x80) return false;
    if (is_arabic_letter(cp)) return true;
    if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;
    if (cp >= 0x0391 && cp <= 0x03C9) return cp != 0x03A2;
    if (cp >= 0x0400 && cp <= 0x04FF) return cp < 0x0482 || cp > 0x0489;
    if (cp >= 0x05D0 && cp <= 0x05EA) return true;
    if (cp >= 0x3041 && cp <= 0x3096) return true;
    if (cp >= 0x30A1 && cp <= 0x30FA) return true;
    if (cp >= 0x4E00 && cp <= 0x9FFF) return true;
    return false;
}

}  // namespace edstop::uni
