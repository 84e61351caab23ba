#pragma once

#include <string>

#include "lattice.hpp"

namespace renskog {

// Flat little-endian float64 binary, x-major then p (slice-major for
// trajectories), plus a JSON header carrying the GridSpec. Round-trips are
// bit-exact.
void save_field(const FieldLattice& field, const std::string& header_path, const std::string& bin_path);
FieldLattice load_field(const std::string& header_path, const std::string& bin_path);

void save_trajectory(const Trajectory& traj, const std::string& header_path, const std::string& bin_path);
Trajectory load_trajectory(const std::string& header_path, const std::string& bin_path);

} // namespace renskog
