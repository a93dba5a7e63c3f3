#include "bergman/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace bergman {

namespace {

// Planning is not thread safe in FFTW, execution with the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({n, sign});
    if (it != plans_.end()) return it->second;
    std::vector<cplx> in(n), out(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(std::make_pair(n, sign), p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(std::vector<cplx>& in, std::vector<cplx>& out, int sign) {
  fftw_plan p = cache().get(in.size(), sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<cplx> circle_samples(const std::vector<cplx>& coeffs, std::size_t L) {
  std::vector<cplx> in(L, cplx(0.0, 0.0)), out(L);
  for (std::size_t k = 0; k < coeffs.size(); ++k) in[k % L] += coeffs[k];
  run(in, out, FFTW_BACKWARD);
  return out;
}

std::vector<cplx> fourier_coefficients(const std::vector<cplx>& samples) {
  std::vector<cplx> in = samples, out(samples.size());
  run(in, out, FFTW_FORWARD);
  const double s = 1.0 / static_cast<double>(samples.size());
  for (auto& v : out) v *= s;
  return out;
}

}  // namespace bergman
