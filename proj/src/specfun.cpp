#include "qdecay/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qdecay/errors.hpp"

namespace qdecay {

namespace {

using cplx = std::complex<double>;

// Maclaurin series is used inside this radius everywhere.
constexpr double kSeriesRadius = 8.0;
// Beyond it the series is still used close to the imaginary axis, where its
// terms share a sign and do not cancel.
constexpr double kAxisBand = 4.0;
constexpr double kSeriesMaxRadius = 200.0;
constexpr int kSeriesMaxTerms = 400;
constexpr int kFractionMaxTerms = 5000;

struct CiSi {
  cplx ci;
  cplx si;
};

CiSi maclaurin(cplx z) {
  const cplx z2 = z * z;
  cplx even = 1.0;  // (-1)^k z^(2k) / (2k)!
  cplx odd = z;     // (-1)^k z^(2k+1) / (2k+1)!
  cplx ci_sum = 0.0;
  cplx si_sum = z;
  double magnitude = std::abs(z);
  for (int k = 1; k <= kSeriesMaxTerms; ++k) {
    even *= -z2 / ((2.0 * k - 1.0) * (2.0 * k));
    odd *= -z2 / ((2.0 * k) * (2.0 * k + 1.0));
    const cplx ci_term = even / (2.0 * k);
    const cplx si_term = odd / (2.0 * k + 1.0);
    ci_sum += ci_term;
    si_sum += si_term;
    const double size = std::abs(ci_term) + std::abs(si_term);
    magnitude += size;
    if (size <= 1e-17 * magnitude) return {kEulerGamma + std::log(z) + ci_sum, si_sum};
  }
  throw NumericalError("Ci/Si series did not converge");
}

// E1(w) by the modified Lentz algorithm on
//   E1(w) = e^{-w} / (w + 1 - 1^2 / (w + 3 - 2^2 / (w + 5 - ...))).
cplx expint_e1_fraction(cplx w) {
  constexpr double tiny = 1e-300;
  cplx b = w + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i <= kFractionMaxTerms; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cplx delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return std::exp(-w) * h;
  }
  throw NumericalError("E1 continued fraction did not converge");
}

// Requires Re z >= 0.
CiSi right_half_plane(cplx z) {
  const double r = std::abs(z);
  const bool near_axis = r - std::abs(z.imag()) <= kAxisBand;
  if (r <= kSeriesRadius || (near_axis && r <= kSeriesMaxRadius)) return maclaurin(z);
  if (z.real() == 0.0)
    throw NumericalError("Ci/Si on the imaginary axis beyond |z| = 200 is not supported");
  // For Re z > 0 neither +iz nor -iz touches the E1 branch cut.
  const cplx ep = expint_e1_fraction(cplx(0.0, 1.0) * z);
  const cplx em = expint_e1_fraction(cplx(0.0, -1.0) * z);
  return {-0.5 * (ep + em), (ep - em) / cplx(0.0, 2.0) + std::numbers::pi / 2.0};
}

CiSi cisi(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidArgument("Ci/Si argument must be finite");
  if (z.real() >= 0.0) return right_half_plane(z);
  // Si is odd and Ci - ln z is even.
  const CiSi mirrored = right_half_plane(-z);
  return {mirrored.ci - std::log(-z) + std::log(z), -mirrored.si};
}

}  // namespace

cplx cosint(cplx z) {
  if (z == cplx(0.0, 0.0)) throw InvalidArgument("Ci has a logarithmic singularity at 0");
  return cisi(z).ci;
}

cplx sinint(cplx z) {
  if (z == cplx(0.0, 0.0)) return z;
  return cisi(z).si;
}

double cot_sum_partial(double z, long long terms) {
  if (!std::isfinite(z)) throw InvalidArgument("z must be finite");
  if (z == std::round(z)) throw InvalidArgument("z is an integer (pole of pi cot(pi z))");
  if (terms < 1) throw InvalidArgument("number of terms must be >= 1");
  // Smallest terms first.
  double sum = 0.0;
  for (long long k = terms; k >= 1; --k) {
    const double kk = static_cast<double>(k);
    sum += 2.0 * z / (z * z - kk * kk);
  }
  return 1.0 / z + sum;
}

}  // namespace qdecay
