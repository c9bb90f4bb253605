#include "absa/utf8.hpp"

namespace absa::utf8 {

char32_t decode(std::string_view text, std::size_t& pos) {
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    std::size_t n = text.size();
    if (pos >= n) return kReplacement;
    unsigned char b0 = s[pos];
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    int len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
    else { ++pos; return kReplacement; }
    if (pos + len > n) { ++pos; return kReplacement; }
    for (int i = 1; i < len; ++i) {
        unsigned char b = s[pos + i];
        if ((b & 0xC0) != 0x80) { ++pos; return kReplacement; }
        cp = (cp << 6) | (b & 0x3F);
    }
    // reject overlong encodings and surrogates
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
        ++pos;
        return kReplacement;
    }
    pos += len;
    return cp;
}

void append(std::string& out, char32_t cp) {
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

std::size_t encoded_size(char32_t cp) {
    if (cp < 0x80) return 1;
    if (cp < 0x800) return 2;
    if (cp < 0x10000) return 3;
    return 4;
}

CodepointRun decode_all(std::string_view text) {
    CodepointRun run;
    run.cps.reserve(text.size());
    run.offsets.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t at = pos;
        char32_t cp = decode(text, pos);
        run.cps.push_back(cp);
        run.offsets.push_back(at);
    }
    return run;
}

std::size_t count_codepoints(std::string_view text) {
    std::size_t pos = 0, count = 0;
    while (pos < text.size()) {
        decode(text, pos);
        ++count;
    }
    return count;
}

bool is_ascii_space(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v';
}

bool is_space(char32_t cp) {
    return is_ascii_space(cp) || cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200A) ||
           cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x3000;
}

bool is_control(char32_t cp) {
    if (is_ascii_space(cp)) return false;
    return cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F) ||
           cp == 0x200B || cp == 0xFEFF;
}

bool is_latin_letter(char32_t cp) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}

bool is_sinhala(char32_t cp) {
    return cp >= 0x0D80 && cp <= 0x0DFF;
}

bool is_digit(char32_t cp) {
    return cp >= '0' && cp <= '9';
}

bool is_letter(char32_t cp) {
    if (cp < 0x80) return is_latin_letter(cp);
    if (is_space(cp) || is_control(cp)) return false;
    if (cp == 0x200C || cp == 0x200D) return false;
    if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation
    if (cp == 0x2581) return false;                  // subword boundary marker
    return true;
}

bool is_word_char(char32_t cp) {
    if (cp < 0x80) return is_latin_letter(cp) || is_digit(cp);
    if (cp == 0x200C || cp == 0x200D) return true;  // joiners are word-internal
    return is_letter(cp);
}

char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    return cp;
}

char32_t compose_pair(char32_t a, char32_t b) {
    if (a == 0x0DD9 && b == 0x0DCA) return 0x0DDA;
    if (a == 0x0DD9 && b == 0x0DCF) return 0x0DDC;
    if (a == 0x0DDC && b == 0x0DCA) return 0x0DDD;
    if (a == 0x0DD9 && b == 0x0DDF) return 0x0DDE;
    return 0;
}

}  // namespace absa::utf8
