#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ctm {

using Bytes = std::vector<std::uint8_t>;

class Compressor {
 public:
  virtual ~Compressor() = default;
  virtual std::string name() const = 0;
  virtual Bytes compress(std::span<const std::uint8_t> data) const = 0;
  virtual Bytes decompress(std::span<const std::uint8_t> data) const = 0;
};

// Raw Deflate stream (no zlib or gzip wrapper), best compression.
class DeflateCompressor : public Compressor {
 public:
  std::string name() const override { return "deflate"; }
  Bytes compress(std::span<const std::uint8_t> data) const override;
  Bytes decompress(std::span<const std::uint8_t> data) const override;
};

// Deflate in a gzip container.
class GzipCompressor : public Compressor {
 public:
  std::string name() const override { return "gzip"; }
  Bytes compress(std::span<const std::uint8_t> data) const override;
  Bytes decompress(std::span<const std::uint8_t> data) const override;
};

// "deflate" or "gzip".
std::unique_ptr<Compressor> make_compressor(const std::string& name);

std::size_t compress_len(std::span<const std::uint8_t> data, const Compressor& compressor = DeflateCompressor{});

}  // namespace ctm
