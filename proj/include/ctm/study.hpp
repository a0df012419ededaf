#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ctm/complexity.hpp"
#include "ctm/compression.hpp"
#include "ctm/distribution.hpp"
#include "ctm/stats.hpp"

namespace ctm {

struct CatalogEntry {
  std::string bits;
  double k = 0.0;
};

// Binary strings with their complexities, grouped by length and sorted by
// ascending k (ties by string).
struct StringCatalog {
  std::map<int, std::vector<CatalogEntry>> by_length;
  std::size_t size() const;
};

// Height-1 arrays of the requested lengths [min_len, max_len].
StringCatalog build_catalog(const FrequencyDistribution& dist, int min_len, int max_len);
StringCatalog build_catalog(const ComplexityTable& table, int min_len, int max_len);

// 200 two-character tokens: the first 200 pairs over 'a'..'p' in
// lexicographic order. String slot s (1-based) writes bit b as token 2(s-1)+b.
class SymbolAlphabet {
 public:
  static constexpr int kSlots = 100;
  SymbolAlphabet();
  const std::string& token(int slot, int bit) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
};

struct DecileFile {
  int decile = 0;  // 1-based
  int index = 0;   // 1-based within the decile
  std::string content;
};

struct DecileFileSet {
  int length = 0;
  int partitions = 0;
  std::size_t partition_size = 0;
  std::size_t discarded = 0;
  int files_per_partition = 0;
  int strings_per_file = 0;
  // Non-empty when a partition holds fewer strings than a file draws.
  std::string scaling_notice;
  std::vector<DecileFile> files;
};

struct DecileLayout {
  int partitions = 10;
  int files_per_partition = 100;
  int strings_per_file = 100;
};

// Splits S(l) into equal partitions by ascending k (remainder dropped from
// the most complex end) and fills each file with strings drawn uniformly
// from its partition.
DecileFileSet generate_files(const StringCatalog& catalog, int length, std::uint64_t seed,
                             const DecileLayout& layout = {});

struct DecileTrend {
  std::vector<double> mean_sizes;  // per decile
  std::vector<std::vector<std::size_t>> sizes;
  double spearman = 0.0;
  bool degenerate = false;  // all means equal
};

DecileTrend decile_trend(const DecileFileSet& files, const Compressor& compressor);

struct PairedK {
  std::string bits;
  double k_1d = 0.0;
  double k_2d = 0.0;
  int length = 0;
};

struct CrossSpaceComparison {
  std::vector<PairedK> pairs;  // ordered by string
  Correlations overall;
  double partial_given_length = 0.0;
  LinearFit fit;  // k_2d on k_1d
  std::map<int, Correlations> by_length;  // lengths with at least 3 pairs
};

// Compressed size of an array rendered in the row-string image format
// (one '0'/'1' per cell, newline per row).
std::size_t compressed_image_size(const OutputArray& image, const Compressor& compressor);

// Joins on strings (height-1 arrays) present in both.
CrossSpaceComparison compare_1d_2d(const FrequencyDistribution& dist_1d, const FrequencyDistribution& dist_2d);

}  // namespace ctm
