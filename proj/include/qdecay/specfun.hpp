#pragma once

#include <complex>

namespace qdecay {

/// Euler-Mascheroni constant to 20 significant digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Cosine integral Ci(z) = gamma_E + ln z + int_0^z (cos u - 1)/u du on the
/// principal branch (cut along the negative real axis). Throws
/// InvalidArgument at z = 0.
std::complex<double> cosint(std::complex<double> z);

/// Sine integral Si(z) = int_0^z sin(u)/u du. Entire and odd.
std::complex<double> sinint(std::complex<double> z);

/// 1/z + sum_{k=1}^{K} 2z / (z^2 - k^2), the partial Mittag-Leffler sum that
/// tends to pi cot(pi z). Integer z (a pole) is rejected, as is K < 1.
double cot_sum_partial(double z, long long terms);

}  // namespace qdecay
