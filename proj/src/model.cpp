#include "qdecay/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qdecay/errors.hpp"

namespace qdecay {

namespace {

constexpr double kCouplingRelTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double ModelParams::denominator_shift() const noexcept {
  const double delta = half_width();
  double shift = delta * delta;
  if (include_vbar_sq && vbar) shift += (*vbar) * (*vbar);
  return shift;
}

double ModelParams::effective_width() const noexcept {
  return std::sqrt(denominator_shift());
}

void ModelParams::validate() const {
  if (!(std::isfinite(alpha) && alpha > 0.0))
    throw InvalidArgument("alpha must be finite and > 0, got " + std::to_string(alpha));
  if (!std::isfinite(omega_s))
    throw InvalidArgument("omega_s must be finite");
  if (epsilon && !(std::isfinite(*epsilon) && *epsilon > 0.0))
    throw InvalidArgument("epsilon must be finite and > 0");
  if (vbar && !(std::isfinite(*vbar) && *vbar >= 0.0))
    throw InvalidArgument("vbar must be finite and >= 0");
  if (include_vbar_sq && !vbar)
    throw InvalidArgument("include_vbar_sq requires vbar");
  if (vbar && epsilon) {
    const double implied = 2.0 * std::numbers::pi * (*vbar) * (*vbar) / *epsilon;
    if (std::abs(implied - alpha) > kCouplingRelTol * alpha)
      throw InvalidArgument("alpha is inconsistent with 2*pi*vbar^2/epsilon (" +
                            std::to_string(alpha) + " vs " + std::to_string(implied) + ")");
  }
}

ModelParams params_from_coupling(double vbar, double epsilon) {
  if (!(std::isfinite(epsilon) && epsilon > 0.0))
    throw InvalidArgument("epsilon must be finite and > 0");
  if (!(std::isfinite(vbar) && vbar >= 0.0))
    throw InvalidArgument("vbar must be finite and >= 0");
  ModelParams p;
  p.alpha = 2.0 * std::numbers::pi * vbar * vbar / epsilon;
  p.epsilon = epsilon;
  p.vbar = vbar;
  p.omega_s = 0.0;
  return p;
}

double lorentzian_density(double omega, const ModelParams& params) {
  return params.alpha / (2.0 * std::numbers::pi) /
         (omega * omega + params.denominator_shift());
}

void validate(const ContinuumSpec& spec) {
  std::visit(overloaded{
                 [](const FullLine&) {},
                 [](const LowerTruncated& s) {
                   if (!std::isfinite(s.omega_min))
                     throw InvalidArgument("omega_min must be finite");
                 },
                 [](const DoublyTruncated& s) {
                   if (!std::isfinite(s.omega_min) || !std::isfinite(s.omega_max))
                     throw InvalidArgument("continuum limits must be finite");
                   if (!(s.omega_min < s.omega_max))
                     throw InvalidArgument("omega_min must be < omega_max");
                 },
                 [](const DiscreteLadder& s) {
                   if (s.m < 0) throw InvalidArgument("ladder half-count m must be >= 0");
                 },
             },
             spec);
}

std::string_view kind_name(const ContinuumSpec& spec) {
  return std::visit(overloaded{
                        [](const FullLine&) { return std::string_view{"full"}; },
                        [](const LowerTruncated&) { return std::string_view{"lower_truncated"}; },
                        [](const DoublyTruncated&) { return std::string_view{"doubly_truncated"}; },
                        [](const DiscreteLadder&) { return std::string_view{"discrete"}; },
                    },
                    spec);
}

}  // namespace qdecay
