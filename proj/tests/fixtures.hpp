#pragma once

#include "ctm/machine.hpp"

namespace fixtures {

// Six-transition (3,2) grid machine used as the worked example of a turmite.
// Its {3,1} entry is never read from a blank grid.
inline const char* kTurmite32 =
    "1,1 -> 0,0,S\n"
    "1,0 -> 3,1,R\n"
    "2,1 -> 3,1,U\n"
    "2,0 -> 0,1,S\n"
    "3,1 -> 0,0,S\n"
    "3,0 -> 2,0,L\n";

inline ctm::MachineSpace space(int n, int m, int dims) {
  return ctm::MachineSpace{n, m, dims == 2 ? ctm::Dims::TwoD : ctm::Dims::OneD};
}

}  // namespace fixtures
