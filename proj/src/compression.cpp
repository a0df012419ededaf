#include "ctm/compression.hpp"

#include <zlib.h>

#include <stdexcept>

#include "ctm/errors.hpp"

namespace ctm {

namespace {

// window_bits: -15 raw deflate, 31 gzip.
Bytes deflate_with(std::span<const std::uint8_t> data, int window_bits) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, window_bits, 9, Z_DEFAULT_STRATEGY) != Z_OK)
    throw std::runtime_error("deflateInit2 failed");
  Bytes out(deflateBound(&zs, static_cast<uLong>(data.size())) + 32);
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw std::runtime_error("deflate did not finish");
  out.resize(produced);
  return out;
}

Bytes inflate_with(std::span<const std::uint8_t> data, int window_bits) {
  z_stream zs{};
  if (inflateInit2(&zs, window_bits) != Z_OK) throw std::runtime_error("inflateInit2 failed");
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  Bytes out;
  std::uint8_t buf[1 << 14];
  int rc;
  do {
    zs.next_out = buf;
    zs.avail_out = sizeof buf;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw RejectedInput("corrupt compressed stream");
    }
    out.insert(out.end(), buf, buf + (sizeof buf - zs.avail_out));
  } while (rc != Z_STREAM_END && (zs.avail_in > 0 || zs.avail_out == 0));
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) throw RejectedInput("truncated compressed stream");
  return out;
}

}  // namespace

Bytes DeflateCompressor::compress(std::span<const std::uint8_t> data) const { return deflate_with(data, -15); }
Bytes DeflateCompressor::decompress(std::span<const std::uint8_t> data) const { return inflate_with(data, -15); }
Bytes GzipCompressor::compress(std::span<const std::uint8_t> data) const { return deflate_with(data, 31); }
Bytes GzipCompressor::decompress(std::span<const std::uint8_t> data) const { return inflate_with(data, 31); }

std::unique_ptr<Compressor> make_compressor(const std::string& name) {
  if (name == "deflate") return std::make_unique<DeflateCompressor>();
  if (name == "gzip") return std::make_unique<GzipCompressor>();
  throw RejectedInput("unknown compressor '" + name + "' (expected deflate or gzip)");
}

std::size_t compress_len(std::span<const std::uint8_t> data, const Compressor& compressor) {
  return compressor.compress(data).size();
}

}  // namespace ctm
