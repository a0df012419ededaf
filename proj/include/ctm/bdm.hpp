#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ctm/complexity.hpp"
#include "ctm/output_array.hpp"

namespace ctm {

struct Patch {
  int row = 0;  // tile coordinates, not cell coordinates
  int col = 0;
  OutputArray cells;
};

struct PartitionMatrix {
  int side = 0;
  int tile_rows = 0;
  int tile_cols = 0;
  std::vector<Patch> patches;  // row-major over tiles
  int pad_rows = 0;
  int pad_cols = 0;
};

// Pads bottom/right with 0 up to multiples of d and cuts d x d tiles.
PartitionMatrix partition(const OutputArray& image, int d);

// Every d x d window (overlapping); the image must be at least d x d.
std::vector<OutputArray> sliding_windows(const OutputArray& image, int d);

enum class BdmMode { Sum, Log };

// Sum of patch complexities. Throws IncompleteTable for a missing patch.
double bdm_sum(const OutputArray& image, const ComplexityTable& table, int d);
// Sum over distinct canonical patches of k + log2(multiplicity).
double bdm_log(const OutputArray& image, const ComplexityTable& table, int d);
// Either mode, over a partition or over all overlapping windows.
double bdm(const OutputArray& image, const ComplexityTable& table, int d, BdmMode mode, bool sliding = false);

// Plain PBM (P1). 1 is black.
OutputArray read_pbm(std::istream& in);
void write_pbm(std::ostream& out, const OutputArray& image);
// One row of 0/1 digits per line.
OutputArray read_row_strings(std::istream& in);
void write_row_strings(std::ostream& out, const OutputArray& image);
// Dispatches on the "P1" magic.
OutputArray load_image(const std::string& path);

}  // namespace ctm
