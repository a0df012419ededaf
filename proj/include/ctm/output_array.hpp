#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctm {

// A rectangular array of symbols (0/1 for binary spaces), stored row-major.
// This is both the output of a halted machine and the unit scored by the
// complexity tables.
class OutputArray {
 public:
  OutputArray() = default;
  OutputArray(int height, int width, std::vector<std::uint8_t> cells);
  OutputArray(int height, int width, std::uint8_t fill = 0);

  // Parses the "<height>x<width>:<row-major digits>" key used in files.
  static OutputArray parse(std::string_view key);
  // One string of digits per row; all rows must share a length.
  static OutputArray from_rows(const std::vector<std::string>& rows);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  std::uint8_t at(int row, int col) const { return cells_[static_cast<std::size_t>(row) * width_ + col]; }
  void set(int row, int col, std::uint8_t v) { cells_[static_cast<std::size_t>(row) * width_ + col] = v; }
  std::span<const std::uint8_t> cells() const { return cells_; }

  std::string key() const;
  std::string row_string(int row) const;

  // Clockwise quarter turn.
  OutputArray rotate90() const;
  OutputArray rotate180() const;
  OutputArray rotate270() const;
  // Mirror left-right.
  OutputArray reflect() const;
  // Binary complement; only meaningful for 0/1 arrays.
  OutputArray complement() const;
  // Exchanges symbols a and b everywhere.
  OutputArray swap_symbols(std::uint8_t a, std::uint8_t b) const;

  OutputArray subarray(int row, int col, int height, int width) const;

  bool is_uniform() const;
  bool is_square() const { return height_ == width_; }

  // Orders by (height, width) and then row-major cells.
  friend std::strong_ordering operator<=>(const OutputArray& a, const OutputArray& b);
  friend bool operator==(const OutputArray& a, const OutputArray& b) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct OutputArrayHash {
  std::size_t operator()(const OutputArray& a) const noexcept;
};

}  // namespace ctm
