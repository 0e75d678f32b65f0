#pragma once

#include "edutainer/error.hpp"

#include <zlib.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace edutainer {

namespace detail {

inline void put16(std::string& o, std::uint16_t v) {
    o += static_cast<char>(v & 0xFF);
    o += static_cast<char>(v >> 8);
}

inline void put32(std::string& o, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) o += static_cast<char>((v >> (8 * k)) & 0xFF);
}

}  // namespace detail

// Stored (uncompressed) zip archive. Timestamps are fixed at 1980-01-01 so
// equal inputs give equal bytes.
inline std::string make_zip(const std::vector<std::pair<std::string, std::string>>& files) {
    using detail::put16;
    using detail::put32;
    constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;
    std::string out, central;
    for (const auto& [name, data] : files) {
        if (name.size() > 0xFFFF || data.size() > 0xFFFFFFFEu || out.size() > 0xFFFFFFFEu)
            throw InvalidArgument("zip: entry too large for a non-zip64 archive");
        const auto crc = static_cast<std::uint32_t>(
            crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
        const auto offset = static_cast<std::uint32_t>(out.size());
        const auto size = static_cast<std::uint32_t>(data.size());

        put32(out, 0x04034b50);
        put16(out, 10);  // version needed
        put16(out, 0);   // flags
        put16(out, 0);   // stored
        put16(out, 0);   // time
        put16(out, kDosDate);
        put32(out, crc);
        put32(out, size);
        put32(out, size);
        put16(out, static_cast<std::uint16_t>(name.size()));
        put16(out, 0);
        out += name;
        out += data;

        put32(central, 0x02014b50);
        put16(central, 20);  // made by
        put16(central, 10);
        put16(central, 0);
        put16(central, 0);
        put16(central, 0);
        put16(central, kDosDate);
        put32(central, crc);
        put32(central, size);
        put32(central, size);
        put16(central, static_cast<std::uint16_t>(name.size()));
        put16(central, 0);  // extra
        put16(central, 0);  // comment
        put16(central, 0);  // disk
        put16(central, 0);  // internal attributes
        put32(central, 0);  // external attributes
        put32(central, offset);
        central += name;
    }
    const auto central_offset = static_cast<std::uint32_t>(out.size());
    out += central;
    put32(out, 0x06054b50);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<std::uint16_t>(files.size()));
    put16(out, static_cast<std::uint16_t>(files.size()));
    put32(out, static_cast<std::uint32_t>(central.size()));
    put32(out, central_offset);
    put16(out, 0);
    return out;
}

}  // namespace edutainer
