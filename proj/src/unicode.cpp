#include "gridbank/unicode.hpp"

#include <sstream>

#include "gridbank/errors.hpp"

namespace gridbank {

namespace {

// Decodes one scalar at `pos`. Returns false on malformed input.
bool decode_one(std::string_view s, std::size_t& pos, char32_t& out) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(s[i]);
  };
  unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    out = b0;
    pos += 1;
    return true;
  }
  std::size_t len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return false;
  }
  if (pos + len > s.size()) return false;
  for (std::size_t i = 1; i < len; ++i) {
    unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return false;
    cp = (cp << 6) | (b & 0x3F);
  }
  // Reject overlong encodings, surrogates and out-of-range values.
  static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len]) return false;
  if (cp >= 0xD800 && cp <= 0xDFFF) return false;
  if (cp > 0x10FFFF) return false;
  out = cp;
  pos += len;
  return true;
}

} // namespace

bool valid_utf8(std::string_view bytes, std::size_t* bad_offset) {
  std::size_t pos = 0;
  char32_t cp;
  while (pos < bytes.size()) {
    std::size_t before = pos;
    if (!decode_one(bytes, pos, cp)) {
      if (bad_offset) *bad_offset = before;
      return false;
    }
  }
  return true;
}

void require_utf8(std::string_view bytes, std::string_view what_name) {
  std::size_t off = 0;
  if (!valid_utf8(bytes, &off)) {
    std::ostringstream msg;
    msg << what_name << ": invalid UTF-8 at byte offset " << off;
    throw EncodingError(msg.str());
  }
}

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string result;
  result.reserve(bytes.size());
  std::size_t pos = 0;
  char32_t cp;
  while (pos < bytes.size()) {
    std::size_t before = pos;
    if (!decode_one(bytes, pos, cp)) {
      std::ostringstream msg;
      msg << "invalid UTF-8 at byte offset " << before;
      throw EncodingError(msg.str());
    }
    result.push_back(cp);
  }
  return result;
}

std::string encode_utf8(std::u32string_view scalars) {
  std::string out;
  out.reserve(scalars.size());
  for (char32_t cp : scalars) {
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
  return out;
}

std::size_t scalar_count(std::string_view bytes) {
  std::size_t n = 0;
  for (char c : bytes) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

char32_t to_lower_scalar(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

bool is_upper_scalar(char32_t cp) {
  return (cp >= U'A' && cp <= U'Z') ||
         (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7);
}

std::u32string to_lower(std::u32string_view scalars) {
  std::u32string out(scalars);
  for (char32_t& cp : out) cp = to_lower_scalar(cp);
  return out;
}

std::string to_lower_utf8(std::string_view bytes) {
  return encode_utf8(to_lower(decode_utf8(bytes)));
}

} // namespace gridbank
