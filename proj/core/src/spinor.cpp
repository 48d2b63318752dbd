#include "socdw/spinor.hpp"

#include <cmath>

#include "fft_util.hpp"

namespace socdw {

namespace {

inline int parity_index(int j, int n) { return j == 0 ? 0 : n - j; }

Eigen::VectorXcd reflect(const Eigen::VectorXcd& v) {
  const int n = static_cast<int>(v.size());
  Eigen::VectorXcd out(n);
  for (int j = 0; j < n; ++j) out[j] = v[parity_index(j, n)];
  return out;
}

Eigen::VectorXcd resample_component(const Eigen::VectorXcd& v, int n_to) {
  const int n_from = static_cast<int>(v.size());
  if (n_to == n_from) return v;
  Eigen::VectorXcd spec = v;
  detail::fft_inplace(spec, FFTW_FORWARD);
  Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(n_to);
  const int half = std::min(n_from, n_to) / 2;
  for (int m = 0; m < half; ++m) padded[m] = spec[m];
  for (int m = 1; m <= half; ++m) padded[n_to - m] = spec[n_from - m];
  detail::fft_inplace(padded, FFTW_BACKWARD);
  padded /= static_cast<double>(n_from);
  return padded;
}

}  // namespace

std::complex<double> inner(const SpinorField& a, const SpinorField& b, double dx) {
  return dx * (a.up.dot(b.up) + a.down.dot(b.down));
}

double norm(const SpinorField& psi, double dx) {
  return std::sqrt(dx * (psi.up.squaredNorm() + psi.down.squaredNorm()));
}

SpinorField normalized(const SpinorField& psi, double dx) {
  const double n = norm(psi, dx);
  return {psi.up / n, psi.down / n};
}

std::array<double, 3> spin_expectation(const SpinorField& psi, double dx) {
  const double nrm2 = dx * (psi.up.squaredNorm() + psi.down.squaredNorm());
  const std::complex<double> cross = dx * psi.up.dot(psi.down);  // <up|down>
  const double sx = cross.real() / nrm2;
  const double sy = cross.imag() / nrm2;
  const double sz = 0.5 * dx * (psi.up.squaredNorm() - psi.down.squaredNorm()) / nrm2;
  return {sx, sy, sz};
}

double left_probability(const SpinorField& psi, const Grid& grid) {
  const int n = grid.n;
  const int mid = grid.origin_index();
  auto density = [&](int j) { return std::norm(psi.up[j]) + std::norm(psi.down[j]); };
  double left = 0.5 * (density(0) + density(mid));
  for (int j = 1; j < mid; ++j) left += density(j);
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += density(j);
  return total > 0.0 ? left / total : 0.0;
}

SpinorField apply_pt(const SpinorField& psi) {
  return {reflect(psi.up).conjugate(), reflect(psi.down).conjugate()};
}

SpinorField apply_sigmax_t(const SpinorField& psi) {
  return {psi.down.conjugate(), psi.up.conjugate()};
}

SpinorField apply_sigmax_p(const SpinorField& psi) {
  return {reflect(psi.down), reflect(psi.up)};
}

SpinorField resample(const SpinorField& psi, const Grid& from, const Grid& to) {
  if (std::abs(from.length - to.length) > 1e-12 * from.length)
    throw ConfigError("resample requires grids of equal extent");
  if (psi.size() != from.n) throw ConfigError("resample: field does not match source grid");
  return {resample_component(psi.up, to.n), resample_component(psi.down, to.n)};
}

}  // namespace socdw
