#pragma once

namespace qlim::constants {

// CODATA 2018 reduced Planck constant, J s. Used by every physical-scale
// module; the single-shot toy model works in hbar = 1 units instead.
inline constexpr double hbar = 1.054571817e-34;

inline constexpr double light_speed = 299792458.0;  // m/s

}  // namespace qlim::constants
