#pragma once

#include <complex>
#include <numbers>

namespace swapquad {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Euler-Mascheroni constant, 30 digits.
inline constexpr double kEulerGamma = 0.577215664901532860606512090082;

inline constexpr Complex kImag{0.0, 1.0};

}  // namespace swapquad
