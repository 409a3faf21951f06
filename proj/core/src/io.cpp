#include "ocr/io.hpp"

#include "ocr/errors.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <string>

namespace ocr {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open " + path.string() + " for reading");
    std::vector<std::uint8_t> bytes;
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(0, std::ios::beg);
    if (end > 0) {
        bytes.resize(static_cast<std::size_t>(end));
        in.read(reinterpret_cast<char*>(bytes.data()), end);
    }
    if (!in)
        throw io_error("failed reading " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
        throw io_error("failed writing " + path.string());
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    write_file(tmp, bytes);
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw io_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                       ec.message());
    }
}

std::vector<std::uint8_t> gzip_inflate(std::span<const std::uint8_t> bytes) {
    z_stream strm{};
    // 15 window bits + 16 selects the gzip wrapper.
    if (inflateInit2(&strm, 15 + 16) != Z_OK)
        throw format_error("zlib initialization failed");

    std::vector<std::uint8_t> out;
    std::uint8_t chunk[1 << 16];
    strm.next_in = const_cast<Bytef*>(bytes.data());
    strm.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        strm.next_out = chunk;
        strm.avail_out = sizeof chunk;
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&strm);
            throw format_error(std::string("gzip decompression failed: ") +
                               (strm.msg ? strm.msg : zError(rc)));
        }
        out.insert(out.end(), chunk, chunk + (sizeof chunk - strm.avail_out));
        if (rc == Z_OK && strm.avail_in == 0 && strm.avail_out != 0) {
            inflateEnd(&strm);
            throw format_error("gzip stream truncated");
        }
    }
    inflateEnd(&strm);
    return out;
}

} // namespace ocr
