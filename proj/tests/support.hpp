#pragma once

#include <string>

#include "ppqe/crystal.hpp"
#include "ppqe/hgh.hpp"

namespace testsupport {

inline std::string data_dir() { return PPQE_DATA_DIR; }
inline std::string hgh_path() { return data_dir() + "/hgh.json"; }
inline std::string material_path(const std::string& stem) { return data_dir() + "/materials/" + stem + ".json"; }

inline ppqe::crystal::ReciprocalLattice cubic(double L) {
    return ppqe::crystal::build_reciprocal({{L, 0, 0}, {0, L, 0}, {0, 0, L}});
}

// Monoclinic, general and orthogonal test cells in Bohr.
inline ppqe::crystal::LatticeVectors ortho_cell() { return {{6.0, 0, 0}, {0, 7.0, 0}, {0, 0, 8.0}}; }
inline ppqe::crystal::LatticeVectors mono_cell() { return {{6.0, 0, 0}, {0, 7.0, 0}, {-1.3, 0, 8.0}}; }
inline ppqe::crystal::LatticeVectors triclinic_cell() { return {{6.0, 0.4, 0.2}, {0.9, 7.0, 0.3}, {-1.1, 0.7, 8.0}}; }

}  // namespace testsupport
