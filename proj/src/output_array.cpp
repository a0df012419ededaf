#include "ctm/output_array.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "ctm/errors.hpp"

namespace ctm {

OutputArray::OutputArray(int height, int width, std::vector<std::uint8_t> cells)
    : height_(height), width_(width), cells_(std::move(cells)) {
  if (height < 1 || width < 1) throw RejectedInput("array dimensions must be positive");
  if (cells_.size() != static_cast<std::size_t>(height) * width)
    throw RejectedInput("array cell count does not match its dimensions");
}

OutputArray::OutputArray(int height, int width, std::uint8_t fill)
    : OutputArray(height, width, std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width, fill)) {}

namespace {

int parse_positive(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1)
    throw RejectedInput("malformed array " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

}  // namespace

OutputArray OutputArray::parse(std::string_view key) {
  auto colon = key.find(':');
  auto x = key.find('x');
  if (colon == std::string_view::npos || x == std::string_view::npos || x > colon)
    throw RejectedInput("malformed array key '" + std::string(key) + "'");
  int h = parse_positive(key.substr(0, x), "height");
  int w = parse_positive(key.substr(x + 1, colon - x - 1), "width");
  auto digits = key.substr(colon + 1);
  if (digits.size() != static_cast<std::size_t>(h) * w)
    throw RejectedInput("array key '" + std::string(key) + "' has the wrong number of cells");
  std::vector<std::uint8_t> cells;
  cells.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') throw RejectedInput("array key '" + std::string(key) + "' has a non-digit cell");
    cells.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return OutputArray(h, w, std::move(cells));
}

OutputArray OutputArray::from_rows(const std::vector<std::string>& rows) {
  if (rows.empty()) throw RejectedInput("image has no rows");
  const auto w = rows.front().size();
  std::vector<std::uint8_t> cells;
  for (const auto& r : rows) {
    if (r.size() != w) throw RejectedInput("image rows differ in length");
    for (char c : r) {
      if (c < '0' || c > '9') throw RejectedInput("image row has a non-digit cell");
      cells.push_back(static_cast<std::uint8_t>(c - '0'));
    }
  }
  return OutputArray(static_cast<int>(rows.size()), static_cast<int>(w), std::move(cells));
}

std::string OutputArray::key() const {
  std::string s = std::to_string(height_) + "x" + std::to_string(width_) + ":";
  s.reserve(s.size() + cells_.size());
  for (auto c : cells_) s.push_back(static_cast<char>('0' + c));
  return s;
}

std::string OutputArray::row_string(int row) const {
  std::string s;
  for (int c = 0; c < width_; ++c) s.push_back(static_cast<char>('0' + at(row, c)));
  return s;
}

OutputArray OutputArray::rotate90() const {
  OutputArray out(width_, height_);
  for (int r = 0; r < height_; ++r)
    for (int c = 0; c < width_; ++c) out.set(c, height_ - 1 - r, at(r, c));
  return out;
}

OutputArray OutputArray::rotate180() const {
  OutputArray out = *this;
  std::reverse(out.cells_.begin(), out.cells_.end());
  return out;
}

OutputArray OutputArray::rotate270() const { return rotate90().rotate180(); }

OutputArray OutputArray::reflect() const {
  OutputArray out = *this;
  for (int r = 0; r < height_; ++r) {
    auto row = out.cells_.begin() + static_cast<std::ptrdiff_t>(r) * width_;
    std::reverse(row, row + width_);
  }
  return out;
}

OutputArray OutputArray::complement() const {
  OutputArray out = *this;
  for (auto& c : out.cells_) c = static_cast<std::uint8_t>(1 - c);
  return out;
}

OutputArray OutputArray::swap_symbols(std::uint8_t a, std::uint8_t b) const {
  OutputArray out = *this;
  for (auto& c : out.cells_) {
    if (c == a) c = b;
    else if (c == b) c = a;
  }
  return out;
}

OutputArray OutputArray::subarray(int row, int col, int height, int width) const {
  OutputArray out(height, width);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) out.set(r, c, at(row + r, col + c));
  return out;
}

bool OutputArray::is_uniform() const {
  return std::all_of(cells_.begin(), cells_.end(), [&](auto c) { return c == cells_.front(); });
}

std::strong_ordering operator<=>(const OutputArray& a, const OutputArray& b) {
  if (auto cmp = a.height_ <=> b.height_; cmp != 0) return cmp;
  if (auto cmp = a.width_ <=> b.width_; cmp != 0) return cmp;
  return std::lexicographical_compare_three_way(a.cells_.begin(), a.cells_.end(), b.cells_.begin(), b.cells_.end());
}

std::size_t OutputArrayHash::operator()(const OutputArray& a) const noexcept {
  // FNV-1a over dimensions and cells.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::uint64_t>(a.height()));
  mix(static_cast<std::uint64_t>(a.width()));
  for (auto c : a.cells()) mix(c);
  return static_cast<std::size_t>(h);
}

}  // namespace ctm
