#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "gauss_stab/numerics.hpp"

namespace gstab {

namespace {

// FFTW's planner is not re-entrant; executing a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {}
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

// Circular convolution of zero-padded a and b on length m, evaluated at
// integer index + shift (shift in [0, 1)) by band-limited interpolation.
std::vector<double> padded_convolution(std::span<const double> a, std::span<const double> b,
                                       std::size_t m, double shift) {
  const std::size_t nc = m / 2 + 1;
  FftwBuffer in_buf(sizeof(double) * m);
  FftwBuffer fa_buf(sizeof(fftw_complex) * nc);
  FftwBuffer fb_buf(sizeof(fftw_complex) * nc);
  auto* in = static_cast<double*>(in_buf.ptr);
  auto* fa = static_cast<fftw_complex*>(fa_buf.ptr);
  auto* fb = static_cast<fftw_complex*>(fb_buf.ptr);

  fftw_plan raw_fwd_a;
  fftw_plan raw_fwd_b;
  fftw_plan raw_inv;
  {
    std::lock_guard lock(planner_mutex());
    raw_fwd_a = fftw_plan_dft_r2c_1d(static_cast<int>(m), in, fa, FFTW_ESTIMATE);
    raw_fwd_b = fftw_plan_dft_r2c_1d(static_cast<int>(m), in, fb, FFTW_ESTIMATE);
    raw_inv = fftw_plan_dft_c2r_1d(static_cast<int>(m), fa, in, FFTW_ESTIMATE);
  }
  Plan fwd_a(raw_fwd_a);
  Plan fwd_b(raw_fwd_b);
  Plan inv(raw_inv);

  std::fill(in, in + m, 0.0);
  std::copy(a.begin(), a.end(), in);
  fwd_a.execute();
  std::fill(in, in + m, 0.0);
  std::copy(b.begin(), b.end(), in);
  fwd_b.execute();

  for (std::size_t k = 0; k < nc; ++k) {
    Complex z = Complex(fa[k][0], fa[k][1]) * Complex(fb[k][0], fb[k][1]);
    if (shift != 0.0) {
      const double angle = 2.0 * kPi * static_cast<double>(k) * shift / static_cast<double>(m);
      if (m % 2 == 0 && k == m / 2) {
        z *= std::cos(angle);
      } else {
        z *= std::polar(1.0, angle);
      }
    }
    fa[k][0] = z.real();
    fa[k][1] = z.imag();
  }
  inv.execute();
  std::vector<double> out(in, in + m);
  const double scale = 1.0 / static_cast<double>(m);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace

std::vector<double> linear_convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t len = a.size() + b.size() - 1;
  auto out = padded_convolution(a, b, next_pow2(len), 0.0);
  out.resize(len);
  return out;
}

std::vector<double> toeplitz_convolve(std::span<const double> f, std::span<const double> lag_values,
                                      double step) {
  const std::size_t n = f.size();
  if (lag_values.size() != 2 * n - 1) {
    fail(ErrorCode::kInvalidArgument, "toeplitz_convolve expects 2n-1 lag values");
  }
  const auto full = linear_convolve(f, lag_values);
  std::vector<double> h(n);
  for (std::size_t j = 0; j < n; ++j) h[j] = step * full[j + n - 1];
  return h;
}

GridFunction fft_convolve(const GridFunction& f, const GridFunction& g, EdgePolicy policy) {
  if (!(f.grid() == g.grid())) fail(ErrorCode::kInvalidArgument, "fft_convolve needs a shared grid");
  const Grid& grid = f.grid();
  const std::size_t n = grid.size();
  if (policy == EdgePolicy::kChecked) {
    constexpr double kEdge = 1e-8;
    for (const GridFunction* fn : {&f, &g}) {
      if (std::abs((*fn)[0]) > kEdge || std::abs((*fn)[n - 1]) > kEdge) {
        fail(ErrorCode::kEdgeLeakage, "convolution operand not negligible at grid edge on " +
                                          describe(grid));
      }
    }
  }

  // h_j = step * c(j + offset), c the linear convolution of the samples.
  const double offset = -grid.lo() / grid.step();
  double whole = std::floor(offset);
  double frac = offset - whole;
  if (frac < 1e-9) {
    frac = 0.0;
  } else if (frac > 1.0 - 1e-9) {
    frac = 0.0;
    whole += 1.0;
  }
  const std::size_t m = next_pow2(3 * n);
  const auto c = padded_convolution(f.values(), g.values(), m, frac);
  const auto base = static_cast<long long>(whole);
  std::vector<double> h(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const long long idx = static_cast<long long>(j) + base;
    if (frac == 0.0) {
      if (idx >= 0 && idx <= static_cast<long long>(2 * n - 2)) h[j] = grid.step() * c[idx];
    } else {
      const long long wrapped = ((idx % static_cast<long long>(m)) + static_cast<long long>(m)) %
                                static_cast<long long>(m);
      h[j] = grid.step() * c[static_cast<std::size_t>(wrapped)];
    }
  }
  return GridFunction(grid, std::move(h));
}

}  // namespace gstab
