// CGS-Gaussian physical constants shared by all modules.
#pragma once

namespace ebath::cgs {

inline constexpr double hbar = 1.054571817e-27;     // erg s
inline constexpr double c = 2.99792458e10;          // cm/s
inline constexpr double e = 4.80320471e-10;         // statC
inline constexpr double m_e = 9.1093837015e-28;     // g, free electron mass
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

} // namespace ebath::cgs
