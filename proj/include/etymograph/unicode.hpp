#ifndef ETYMOGRAPH_UNICODE_HPP
#define ETYMOGRAPH_UNICODE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

namespace etymograph {

// NFC-normalizes a UTF-8 string. CJK compatibility ideographs otherwise split
// one root into several graph nodes. Throws on invalid UTF-8.
inline std::string nfc(const std::string& utf8) {
    UErrorCode status = U_ZERO_ERROR;
    const UNormalizer2* norm = unorm2_getNFCInstance(&status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU: no NFC instance");

    std::vector<UChar> u16(utf8.size() + 1);
    int32_t u16_len = 0;
    u_strFromUTF8(u16.data(), static_cast<int32_t>(u16.size()), &u16_len,
                  utf8.data(), static_cast<int32_t>(utf8.size()), &status);
    if (U_FAILURE(status)) throw std::runtime_error("invalid UTF-8");

    std::vector<UChar> out(2 * u16.size() + 16);
    int32_t out_len = unorm2_normalize(norm, u16.data(), u16_len, out.data(),
                                       static_cast<int32_t>(out.size()), &status);
    if (U_FAILURE(status)) throw std::runtime_error("unicode normalization failed");

    std::string result(4 * static_cast<std::size_t>(out_len) + 4, '\0');
    int32_t u8_len = 0;
    u_strToUTF8(result.data(), static_cast<int32_t>(result.size()), &u8_len,
                out.data(), out_len, &status);
    if (U_FAILURE(status)) throw std::runtime_error("UTF-8 re-encoding failed");
    result.resize(static_cast<std::size_t>(u8_len));
    return result;
}

}  // namespace etymograph

#endif
