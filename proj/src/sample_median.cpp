#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hybridk/geometry.hpp"
#include "hybridk/solver.hpp"

namespace hybridk::solver {

namespace {

constexpr int kWeiszfeldSteps = 30;

std::vector<double> centroid(const PointSet& sample) {
  std::vector<double> c(sample.dim(), 0.0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = 0; j < sample.dim(); ++j) c[j] += sample[i][j];
  }
  for (double& v : c) v /= static_cast<double>(sample.size());
  return c;
}

std::vector<double> weiszfeld(const PointSet& sample) {
  const std::size_t d = sample.dim();
  std::vector<double> x = centroid(sample);
  const double diameter = max_pairwise_distance(sample);
  if (diameter == 0.0) return x;
  std::vector<double> next(d);
  for (int step = 0; step < kWeiszfeldSteps; ++step) {
    double weight_sum = 0.0;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < sample.size(); ++i) {
      double dd = dist(sample[i], x);
      if (dd < 1e-12 * diameter) {
        // Sitting on a data point: the update is singular, nudge off it.
        for (double& v : x) v += 1e-9 * diameter;
        dd = dist(sample[i], x);
      }
      const double w = 1.0 / dd;
      weight_sum += w;
      for (std::size_t j = 0; j < d; ++j) next[j] += w * sample[i][j];
    }
    for (std::size_t j = 0; j < d; ++j) next[j] /= weight_sum;
    x.swap(next);
  }
  return x;
}

// Tracks the pool member with the lowest cost over the sample.
class PoolBest {
 public:
  PoolBest(const PointSet& sample, Power z) : eval_(sample), z_(z), scratch_(sample.size()) {}

  void offer(std::span<const double> candidate) {
    std::fill(scratch_.begin(), scratch_.end(), std::numeric_limits<double>::infinity());
    eval_.add_center(candidate, scratch_);
    const double value = eval_.total(scratch_, 0.0, z_);
    if (value < best_cost_) {
      best_cost_ = value;
      best_.assign(candidate.begin(), candidate.end());
    }
  }

  Point result() const { return Point(best_); }

 private:
  CostEvaluator eval_;
  Power z_;
  std::vector<double> scratch_;
  double best_cost_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_;
};

// Means of every subset of size 2..max_size, by size then lexicographically.
void offer_subset_means(const PointSet& sample, std::size_t max_size, PoolBest& pool) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  std::vector<std::size_t> idx;
  std::vector<double> sum(d), mean(d);
  for (std::size_t size = 2; size <= max_size; ++size) {
    idx.resize(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      std::fill(sum.begin(), sum.end(), 0.0);
      for (std::size_t i : idx) {
        for (std::size_t j = 0; j < d; ++j) sum[j] += sample[i][j];
      }
      for (std::size_t j = 0; j < d; ++j) mean[j] = sum[j] / static_cast<double>(size);
      pool.offer(mean);

      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == n - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
}

}  // namespace

Point approx_solution_on_sample(const PointSet& sample, double delta, Power z) {
  if (sample.empty()) throw InvalidInput("1-median of an empty sample");
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  PoolBest pool(sample, z);
  for (std::size_t i = 0; i < sample.size(); ++i) pool.offer(sample[i]);
  const double limit = std::ceil(1.0 / delta);
  const std::size_t max_size =
      limit >= static_cast<double>(sample.size()) ? sample.size() : static_cast<std::size_t>(limit);
  offer_subset_means(sample, max_size, pool);
  pool.offer(z == Power::kLinear ? weiszfeld(sample) : centroid(sample));
  return pool.result();
}

}  // namespace hybridk::solver
