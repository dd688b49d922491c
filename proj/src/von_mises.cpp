#include "vh/von_mises.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vh/error.hpp"
#include "vh/quadrature.hpp"
#include "vh/state.hpp"

namespace vh {

namespace {

constexpr double kPi = std::numbers::pi;

// sum_k (z^2/4)^k / (k! (k+nu)!) for nu = 0, 1; all terms positive.
double series(double z, int nu) {
  const double q = 0.25 * z * z;
  double term = nu == 0 ? 1.0 : 0.5 * z;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(nu) / z^k,
// a_k = prod_{j<=k} (4nu^2 - (2j-1)^2) / (8 j); truncated at the smallest term.
double asymptotic(double z, int nu) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = -term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * kPi * z);
}

void check_z(double z) {
  if (!(z >= 0.0)) throw Error(Errc::domain, "Bessel argument must be non-negative");
}

}  // namespace

double bessel_i0e(double z) {
  check_z(z);
  return z < kBesselSwitch ? series(z, 0) * std::exp(-z) : asymptotic(z, 0);
}

double bessel_i1e(double z) {
  check_z(z);
  return z < kBesselSwitch ? series(z, 1) * std::exp(-z) : asymptotic(z, 1);
}

double bessel_i0(double z) {
  check_z(z);
  return z < kBesselSwitch ? series(z, 0) : asymptotic(z, 0) * std::exp(z);
}

VonMises::VonMises(double d_, double center_) : d(d_), center(wrap_angle(center_)) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    std::ostringstream os;
    os << "Von Mises noise intensity must be positive, got " << d;
    throw Error(Errc::domain, os.str());
  }
}

double VonMises::pdf(double angle) const {
  const double k = 1.0 / d;
  // exp(k cos) / (2 pi I0(k)) = exp(k (cos - 1)) / (2 pi I0e(k))
  return std::exp(k * (std::cos(angle - center) - 1.0)) / (2.0 * kPi * bessel_i0e(k));
}

double VonMises::cdf(double angle) const {
  const double dev = wrap_angle(angle - center);
  const double k = 1.0 / d;
  const double norm = 2.0 * kPi * bessel_i0e(k);
  auto f = [k](double s) { return std::exp(k * (std::cos(s) - 1.0)); };
  // Integrate from the nearer end for accuracy in the tails.
  if (dev <= 0.0) return integrate_adaptive(f, -kPi, dev, 1e-14).value / norm;
  return 0.5 + integrate_adaptive(f, 0.0, dev, 1e-14).value / norm;
}

double VonMises::mean_resultant() const {
  const double k = 1.0 / d;
  return bessel_i1e(k) / bessel_i0e(k);
}

double VonMises::sample(StreamRng& rng) const {
  const double k = 1.0 / d;
  if (k < 1e-6) return wrap_angle(center + kPi * (2.0 * rng.uniform() - 1.0));
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * k * k);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * k);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  for (;;) {
    const double z = std::cos(kPi * rng.uniform());
    const double f = (1.0 + r * z) / (r + z);
    const double c = k * (r - f);
    const double u2 = rng.uniform();
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double a = std::acos(std::fmax(-1.0, std::fmin(1.0, f)));
      return wrap_angle(center + (rng.uniform() < 0.5 ? -a : a));
    }
  }
}

double von_mises_pdf(const VonMises& vm, double angle) { return vm.pdf(angle); }

}  // namespace vh
