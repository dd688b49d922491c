#pragma once

#include <string>

#include "vh/macro_schemes.hpp"
#include "vh/particle_sim.hpp"

namespace vh {

/// Columns x,rho,theta,circ_var. Undefined (NaN) values are written as empty fields.
void write_profile_csv(const std::string& path, const Profile& p);

/// Columns x,rho,theta at cell centers.
void write_grid_csv(const std::string& path, const MacroGrid& g);

/// Reads the profile format; circ_var is optional. A grid CSV reads as a
/// profile with circ_var 0.
Profile read_profile_csv(const std::string& path);

/// Shortest decimal form that round-trips, empty for NaN.
std::string format_number(double v);

}  // namespace vh
