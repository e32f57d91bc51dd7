#pragma once

namespace shgsim {

inline constexpr double speed_of_light = 299792458.0;            // m/s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double pi = 3.14159265358979323846264338327950288;

}  // namespace shgsim
