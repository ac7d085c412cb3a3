#pragma once

// Data-parallel inner loops of the cost function.
//
// Every kernel exists as a scalar reference and, on x86-64, an AVX2 variant.
// Variants are bit-for-bit equivalent: per-lane arithmetic follows the scalar
// operation order exactly and no fused multiply-add is used. Reductions over
// points are not kernels; callers sum in point-index order.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hybridk::kernels {

/// Axis-major (structure-of-arrays) copy of a point set: coordinate j of point
/// i lives at axis(j)[i].
class ColumnBlock {
 public:
  ColumnBlock() = default;
  ColumnBlock(std::size_t dim, std::span<const double> row_major);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return n_; }
  std::span<const double> axis(std::size_t j) const { return {data_.data() + j * n_, n_}; }

 private:
  std::size_t dim_ = 0;
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct KernelTable {
  std::string_view name;

  // best[i] = min(best[i], |x_i - center|^2)
  void (*min_sq_dist)(const ColumnBlock& pts, const double* center, double* best);

  // out[i] = max(sqrt(sq[i]) - r, 0)^z, z in {1, 2}
  void (*thresholded_power)(const double* sq, std::size_t n, double r, int z, double* out);
};

const KernelTable& scalar_table();

/// AVX2 table, or nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// Best table for this CPU, chosen once. HYBRIDK_KERNELS=scalar forces the
/// reference path.
const KernelTable& active();

}  // namespace hybridk::kernels
