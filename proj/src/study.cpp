#include "ctm/study.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "ctm/errors.hpp"

namespace ctm {

std::size_t StringCatalog::size() const {
  std::size_t n = 0;
  for (const auto& [l, v] : by_length) n += v.size();
  return n;
}

namespace {

template <class Source>
StringCatalog catalog_from(const Source& entries, int min_len, int max_len,
                           const std::function<double(const OutputArray&)>& k_of_entry) {
  StringCatalog cat;
  for (const auto& item : entries) {
    const OutputArray& s = item.first;
    if (s.height() != 1 || s.width() < min_len || s.width() > max_len) continue;
    cat.by_length[s.width()].push_back(CatalogEntry{s.row_string(0), k_of_entry(s)});
  }
  for (auto& [l, v] : cat.by_length)
    std::sort(v.begin(), v.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
      return a.k != b.k ? a.k < b.k : a.bits < b.bits;
    });
  return cat;
}

// Uniform integer below `bound` from raw 64-bit draws (portable across
// standard libraries, unlike uniform_int_distribution).
std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return v % bound;
}

}  // namespace

StringCatalog build_catalog(const FrequencyDistribution& dist, int min_len, int max_len) {
  if (dist.space().dims != Dims::OneD) throw RejectedInput("string catalogs are built from 1D distributions");
  return catalog_from(dist.entries(), min_len, max_len, [&](const OutputArray& s) {
    return k_from_counts(dist.count(s), dist.halting());
  });
}

StringCatalog build_catalog(const ComplexityTable& table, int min_len, int max_len) {
  if (table.policy().group_order() != 1) throw RejectedInput("string catalogs need a table without symmetry classes");
  return catalog_from(table.entries(), min_len, max_len,
                      [&](const OutputArray& s) { return table.find_canonical(s)->k; });
}

SymbolAlphabet::SymbolAlphabet() {
  for (char a = 'a'; a <= 'p' && tokens_.size() < 2 * kSlots; ++a)
    for (char b = 'a'; b <= 'p' && tokens_.size() < 2 * kSlots; ++b) tokens_.push_back(std::string{a, b});
}

const std::string& SymbolAlphabet::token(int slot, int bit) const {
  if (slot < 1 || slot > kSlots || (bit != 0 && bit != 1)) throw RejectedInput("alphabet slot out of range");
  return tokens_[static_cast<std::size_t>(2 * (slot - 1) + bit)];
}

DecileFileSet generate_files(const StringCatalog& catalog, int length, std::uint64_t seed,
                             const DecileLayout& layout) {
  if (layout.partitions < 1 || layout.files_per_partition < 1 || layout.strings_per_file < 1)
    throw RejectedInput("decile layout counts must be positive");
  if (layout.strings_per_file > SymbolAlphabet::kSlots)
    throw RejectedInput("a file holds at most " + std::to_string(SymbolAlphabet::kSlots) + " strings");
  auto it = catalog.by_length.find(length);
  const std::size_t n = it == catalog.by_length.end() ? 0 : it->second.size();
  const auto parts = static_cast<std::size_t>(layout.partitions);
  if (n < parts)
    throw RejectedInput("length " + std::to_string(length) + " has " + std::to_string(n) + " strings, fewer than " +
                        std::to_string(parts) + " partitions");

  DecileFileSet set;
  set.length = length;
  set.partitions = layout.partitions;
  set.partition_size = n / parts;
  set.discarded = n % parts;
  set.files_per_partition = layout.files_per_partition;
  set.strings_per_file = layout.strings_per_file;
  if (set.partition_size < static_cast<std::size_t>(layout.strings_per_file))
    set.scaling_notice = "length " + std::to_string(length) + ": partitions hold " +
                         std::to_string(set.partition_size) + " strings, files draw " +
                         std::to_string(layout.strings_per_file) + " (draws repeat strings)";

  const SymbolAlphabet alphabet;
  const auto& strings = it->second;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(length)};
  std::mt19937_64 rng(seq);
  for (int p = 1; p <= layout.partitions; ++p) {
    const std::size_t base = static_cast<std::size_t>(p - 1) * set.partition_size;
    for (int f = 1; f <= layout.files_per_partition; ++f) {
      DecileFile file{p, f, {}};
      file.content.reserve(static_cast<std::size_t>(layout.strings_per_file) * length * 2);
      for (int s = 1; s <= layout.strings_per_file; ++s) {
        const auto& bits = strings[base + below(rng, set.partition_size)].bits;
        for (char c : bits) file.content += alphabet.token(s, c - '0');
      }
      set.files.push_back(std::move(file));
    }
  }
  return set;
}

DecileTrend decile_trend(const DecileFileSet& files, const Compressor& compressor) {
  DecileTrend t;
  t.sizes.resize(static_cast<std::size_t>(files.partitions));
  for (const auto& f : files.files) {
    auto* p = reinterpret_cast<const std::uint8_t*>(f.content.data());
    t.sizes[static_cast<std::size_t>(f.decile - 1)].push_back(compress_len({p, f.content.size()}, compressor));
  }
  std::vector<double> idx;
  for (std::size_t p = 0; p < t.sizes.size(); ++p) {
    double sum = 0;
    for (auto s : t.sizes[p]) sum += static_cast<double>(s);
    t.mean_sizes.push_back(t.sizes[p].empty() ? 0.0 : sum / static_cast<double>(t.sizes[p].size()));
    idx.push_back(static_cast<double>(p + 1));
  }
  t.degenerate = std::adjacent_find(t.mean_sizes.begin(), t.mean_sizes.end(), std::not_equal_to<>()) ==
                 t.mean_sizes.end();
  t.spearman = t.degenerate || idx.size() < 3 ? std::nan("") : spearman(idx, t.mean_sizes);
  return t;
}

std::size_t compressed_image_size(const OutputArray& image, const Compressor& compressor) {
  Bytes text;
  text.reserve(image.size() + static_cast<std::size_t>(image.height()));
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) text.push_back(static_cast<std::uint8_t>('0' + image.at(r, c)));
    text.push_back('\n');
  }
  return compress_len(text, compressor);
}

CrossSpaceComparison compare_1d_2d(const FrequencyDistribution& dist_1d, const FrequencyDistribution& dist_2d) {
  CrossSpaceComparison c;
  for (const auto& [s, n] : dist_1d.entries()) {
    if (s.height() != 1) continue;
    auto it = dist_2d.entries().find(s);
    if (it == dist_2d.entries().end()) continue;
    c.pairs.push_back(PairedK{s.row_string(0), k_from_counts(n, dist_1d.halting()),
                              k_from_counts(it->second, dist_2d.halting()), s.width()});
  }
  std::sort(c.pairs.begin(), c.pairs.end(), [](const PairedK& a, const PairedK& b) {
    return a.length != b.length ? a.length < b.length : a.bits < b.bits;
  });
  if (c.pairs.size() < 3) throw RejectedInput("fewer than 3 shared strings to compare");
  std::vector<double> a, b, len;
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> per;
  for (const auto& p : c.pairs) {
    a.push_back(p.k_1d);
    b.push_back(p.k_2d);
    len.push_back(p.length);
    per[p.length].first.push_back(p.k_1d);
    per[p.length].second.push_back(p.k_2d);
  }
  c.overall = correlation_study(a, b);
  c.partial_given_length = partial_corr(a, b, len);
  c.fit = ols(a, b);
  for (const auto& [l, xy] : per)
    if (xy.first.size() >= 3) c.by_length[l] = correlation_study(xy.first, xy.second);
  return c;
}

}  // namespace ctm
