#pragma once

#include <fftw3.h>

#include <Eigen/Core>
#include <complex>
#include <mutex>

namespace socdw::detail {

// FFTW planning is not thread safe; every plan creation/destruction in the
// library goes through this mutex. Execution on distinct buffers is fine.
inline std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// One-shot unnormalized transform (sign = FFTW_FORWARD or FFTW_BACKWARD).
// Plans with FFTW_ESTIMATE so results are reproducible run to run.
inline void fft_inplace(Eigen::VectorXcd& v, int sign) {
  auto* data = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(v.size()), data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace socdw::detail
