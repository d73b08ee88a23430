#include <algorithm>
#include <sstream>

#include "gauss_stab/numerics.hpp"

namespace gstab {

Grid::Grid(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n), step_(0.0) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    fail(ErrorCode::kInvalidArgument, "grid requires finite lo < hi");
  }
  if (n < 2) fail(ErrorCode::kInvalidArgument, "grid requires at least two points");
  step_ = (hi - lo) / static_cast<double>(n - 1);
}

std::vector<double> Grid::points() const {
  std::vector<double> p(n_);
  for (std::size_t k = 0; k < n_; ++k) p[k] = point(k);
  return p;
}

std::size_t Grid::cell_of(double x) const noexcept {
  const double u = (x - lo_) / step_;
  if (!(u > 0.0)) return 0;
  const auto k = static_cast<std::size_t>(u);
  return std::min(k, n_ - 2);
}

Grid Grid::refined(std::size_t factor) const {
  if (factor == 0) fail(ErrorCode::kInvalidArgument, "refinement factor must be positive");
  return Grid(lo_, hi_, (n_ - 1) * factor + 1);
}

std::string describe(const Grid& grid) {
  std::ostringstream os;
  os << "[" << grid.lo() << ", " << grid.hi() << "] n=" << grid.size();
  return os.str();
}

}  // namespace gstab
