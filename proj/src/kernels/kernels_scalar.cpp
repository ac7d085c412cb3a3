#include <algorithm>
#include <cmath>

#include "hybridk/kernels.hpp"

namespace hybridk::kernels {

ColumnBlock::ColumnBlock(std::size_t dim, std::span<const double> row_major)
    : dim_(dim), n_(dim == 0 ? 0 : row_major.size() / dim), data_(row_major.size()) {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) data_[j * n_ + i] = row_major[i * dim_ + j];
  }
}

namespace {

void min_sq_dist_scalar(const ColumnBlock& pts, const double* center, double* best) {
  const std::size_t n = pts.size();
  const std::size_t d = pts.dim();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = pts.axis(j)[i] - center[j];
      acc = acc + diff * diff;
    }
    best[i] = std::min(best[i], acc);
  }
}

void thresholded_power_scalar(const double* sq, std::size_t n, double r, int z, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::max(std::sqrt(sq[i]) - r, 0.0);
    out[i] = z == 2 ? t * t : t;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &min_sq_dist_scalar, &thresholded_power_scalar};
  return table;
}

}  // namespace hybridk::kernels
