#include "hybridk/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "hybridk/geometry.hpp"

namespace hybridk::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double term(double sq, double r, Power z) {
  const double t = std::max(std::sqrt(sq) - r, 0.0);
  return z == Power::kSquared ? t * t : t;
}

double sq_between(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    acc = acc + diff * diff;
  }
  return acc;
}

// C(m, t), saturating at `cap + 1`.
std::uint64_t binomial_capped(std::uint64_t m, std::uint64_t t, std::uint64_t cap) {
  if (t > m) return 0;
  t = std::min(t, m - t);
  long double acc = 1.0L;
  for (std::uint64_t i = 1; i <= t; ++i) {
    acc = acc * static_cast<long double>(m - t + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(std::llround(acc));
}

void validate(const PointSet& points, int k, double r) {
  if (points.empty()) throw InvalidInput("oracle needs at least one point");
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (!(r >= 0.0)) throw InvalidInput("radius must be non-negative");
}

// Depth-first lexicographic enumeration of t-subsets with per-depth prefix minima.
class SubsetSearch {
 public:
  SubsetSearch(const PointSet& points, const PointSet& candidates, double r, Power z, std::size_t t)
      : points_(points), candidates_(candidates), r_(r), z_(z), t_(t), n_(points.size()),
        prefix_((t + 1) * points.size(), kInf), chosen_(t) {
    if (t_ > 1) {
      values_.resize(candidates.size() * n_);
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        for (std::size_t i = 0; i < n_; ++i) {
          values_[c * n_ + i] = term(sq_between(points[i], candidates[c]), r, z);
        }
      }
    } else {
      row_.resize(n_);
    }
  }

  void run() { descend(0, 0); }

  double best_cost() const { return best_cost_; }
  const std::vector<std::size_t>& best() const { return best_; }

 private:
  const double* row(std::size_t c) {
    if (t_ > 1) return values_.data() + c * n_;
    for (std::size_t i = 0; i < n_; ++i) row_[i] = term(sq_between(points_[i], candidates_[c]), r_, z_);
    return row_.data();
  }

  void descend(std::size_t depth, std::size_t start) {
    const std::size_t m = candidates_.size();
    const double* parent = prefix_.data() + depth * n_;
    double* current = prefix_.data() + (depth + 1) * n_;
    for (std::size_t c = start; c + (t_ - depth) <= m; ++c) {
      const double* values = row(c);
      for (std::size_t i = 0; i < n_; ++i) current[i] = std::min(parent[i], values[i]);
      chosen_[depth] = c;
      if (depth + 1 == t_) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n_; ++i) sum += current[i];
        if (sum < best_cost_) {
          best_cost_ = sum;
          best_ = chosen_;
        }
      } else {
        descend(depth + 1, c + 1);
      }
    }
  }

  const PointSet& points_;
  const PointSet& candidates_;
  double r_;
  Power z_;
  std::size_t t_;
  std::size_t n_;
  std::vector<double> values_;
  std::vector<double> row_;
  std::vector<double> prefix_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
  double best_cost_ = kInf;
};

struct Box {
  std::vector<double> lo;
  std::vector<double> extent;
};

struct ClusterBound {
  double lower = 0.0;      // certified lower bound on the cluster's minimum over the box
  std::vector<double> at;  // a point of the box, used for the upper bound
};

// Minimum over a box of g(c) = sum of max(|c - p| - r, 0)^z over a fixed
// cluster. g is convex, so a subgradient s at any x gives
// g(c) >= g(x) + <s, c - x> on the whole box. x comes from a clipped
// Weiszfeld-style fixed-point iteration.
class ClusterSolver {
 public:
  ClusterSolver(const PointSet& points, double r, Power z) : points_(points), r_(r), z_(z) {}

  ClusterBound solve(const std::vector<std::size_t>& members, const std::vector<double>& lo,
                     const std::vector<double>& hi, const std::vector<double>* start = nullptr) const {
    const std::size_t d = lo.size();
    std::vector<double> x(d, 0.0);
    if (start != nullptr) {
      x = *start;
    } else {
      for (std::size_t i : members) {
        for (std::size_t j = 0; j < d; ++j) x[j] += points_[i][j];
      }
      for (double& v : x) v /= static_cast<double>(members.size());
    }
    for (std::size_t j = 0; j < d; ++j) x[j] = clip(x[j], lo[j], hi[j]);
    double fx = value(members, x);

    double scale = 0.0;
    for (std::size_t j = 0; j < d; ++j) scale = std::max(scale, hi[j] - lo[j]);
    double step = scale;
    std::vector<double> next(d), descent(d);
    // Weiszfeld-style step on the points outside their ring; when it fails
    // to descend, a backtracking step along the negative subgradient.
    for (int iter = 0; iter < kSteps && fx > 0.0; ++iter) {
      std::fill(next.begin(), next.end(), 0.0);
      std::fill(descent.begin(), descent.end(), 0.0);
      double weight_sum = 0.0;
      for (std::size_t i : members) {
        const double dd = std::sqrt(sq_between(points_[i], x));
        if (dd <= r_ || dd == 0.0) continue;
        const double w = z_ == Power::kLinear ? 1.0 / dd : (dd - r_) / dd;
        weight_sum += w;
        for (std::size_t j = 0; j < d; ++j) {
          next[j] += w * points_[i][j];
          descent[j] += w * (x[j] - points_[i][j]);
        }
      }
      if (weight_sum == 0.0) break;
      for (std::size_t j = 0; j < d; ++j) next[j] = clip(next[j] / weight_sum, lo[j], hi[j]);
      double f_next = value(members, next);
      if (!(f_next < fx)) {
        double norm = 0.0;
        for (double v : descent) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) break;
        bool moved = false;
        for (double t = step; t > 1e-13 * scale; t *= 0.5) {
          for (std::size_t j = 0; j < d; ++j) next[j] = clip(x[j] - t * descent[j] / norm, lo[j], hi[j]);
          f_next = value(members, next);
          if (f_next < fx) {
            step = 2.0 * t;
            moved = true;
            break;
          }
        }
        if (!moved) break;
      }
      x.swap(next);
      fx = f_next;
    }
    double best = value(members, x);
    // The 1-median often sits exactly on a data point, where the iteration
    // only creeps towards it.
    if (r_ == 0.0 && z_ == Power::kLinear) {
      for (std::size_t i : members) {
        const auto p = points_[i];
        bool inside = true;
        for (std::size_t j = 0; j < d && inside; ++j) inside = p[j] >= lo[j] && p[j] <= hi[j];
        if (!inside) continue;
        const std::vector<double> candidate(p.begin(), p.end());
        const double v = value(members, candidate);
        if (v < best) {
          best = v;
          x = candidate;
        }
      }
    }

    // Every choice of t_p in [0, 1] gives the affine minorant
    //   sum_p t_p (<u_p, c - p> - r) <= g(c),  u_p = (x - p) / |x - p|,
    // for z = 1. Points far from their ring keep t_p = 1 (outside) or 0
    // (inside); points near the ring get the t_p that best flattens the slope,
    // which is what makes the bound tight at minimizers where circles cross.
    // For z = 2 the function is differentiable and the tangent plane is used.
    double diameter2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) diameter2 += (hi[j] - lo[j]) * (hi[j] - lo[j]);
    const double band = std::sqrt(diameter2);

    std::vector<double> slope(d, 0.0);
    double lower = 0.0;
    double kinks = 0.0;
    struct Ring {
      std::vector<double> unit;
      double excess;
      double t;
    };
    std::vector<Ring> rings;
    for (std::size_t i : members) {
      const double dd = std::sqrt(sq_between(points_[i], x));
      if (z_ == Power::kSquared) {
        if (dd <= r_) continue;
        const double coef = 2.0 * (dd - r_) / dd;
        lower += (dd - r_) * (dd - r_);
        for (std::size_t j = 0; j < d; ++j) slope[j] += coef * (x[j] - points_[i][j]);
        continue;
      }
      if (dd == 0.0) {
        if (r_ == 0.0) kinks += 1.0;  // subdifferential is the unit ball
        continue;
      }
      std::vector<double> unit(d);
      for (std::size_t j = 0; j < d; ++j) unit[j] = (x[j] - points_[i][j]) / dd;
      if (std::abs(dd - r_) <= band) {
        rings.push_back({std::move(unit), dd - r_, dd > r_ ? 1.0 : 0.0});
        continue;
      }
      if (dd <= r_) continue;
      lower += dd - r_;
      for (std::size_t j = 0; j < d; ++j) slope[j] += unit[j];
    }
    // Coordinate ascent on the bound itself, which is concave and piecewise
    // linear in each t_p: the best t_p is 0, 1 or a point where a slope
    // component changes sign. Starting from the plain tangent choice, every
    // step can only raise the bound.
    auto box_term = [&](const std::vector<double>& sl) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += std::min(sl[j] * (lo[j] - x[j]), sl[j] * (hi[j] - x[j]));
      return acc;
    };
    for (const Ring& ring : rings) {
      lower += ring.t * ring.excess;
      for (std::size_t j = 0; j < d; ++j) slope[j] += ring.t * ring.unit[j];
    }
    if (!rings.empty() && kinks == 0.0) {
      std::vector<double> trial(d);
      std::vector<double> options;
      for (int sweep = 0; sweep < 8; ++sweep) {
        bool changed = false;
        for (Ring& ring : rings) {
          options.assign({0.0, 1.0});
          for (std::size_t j = 0; j < d; ++j) {
            if (ring.unit[j] == 0.0) continue;
            const double t = ring.t - slope[j] / ring.unit[j];
            if (t > 0.0 && t < 1.0) options.push_back(t);
          }
          double best_t = ring.t;
          double best_value = ring.t * ring.excess + box_term(slope);
          for (double t : options) {
            for (std::size_t j = 0; j < d; ++j) trial[j] = slope[j] + (t - ring.t) * ring.unit[j];
            const double v = t * ring.excess + box_term(trial);
            if (v > best_value + 1e-15 * std::abs(best_value)) {
              best_value = v;
              best_t = t;
            }
          }
          if (best_t != ring.t) {
            lower += (best_t - ring.t) * ring.excess;
            for (std::size_t j = 0; j < d; ++j) slope[j] += (best_t - ring.t) * ring.unit[j];
            ring.t = best_t;
            changed = true;
          }
        }
        if (!changed) break;
      }
    }
    if (kinks > 0.0) {
      double norm = 0.0;
      for (double v : slope) norm += v * v;
      norm = std::sqrt(norm);
      const double keep = norm > kinks ? 1.0 - kinks / norm : 0.0;
      for (double& v : slope) v *= keep;
    }
    for (std::size_t j = 0; j < d; ++j) {
      lower += std::min(slope[j] * (lo[j] - x[j]), slope[j] * (hi[j] - x[j]));
    }
    return ClusterBound{std::max(lower, 0.0), std::move(x)};
  }

 private:
  static constexpr int kSteps = 100;

  static double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

  double value(const std::vector<std::size_t>& members, const std::vector<double>& x) const {
    double acc = 0.0;
    for (std::size_t i : members) acc += term(sq_between(points_[i], x), r_, z_);
    return acc;
  }

  const PointSet& points_;
  double r_;
  Power z_;
};

// Certified branch-and-bound over tuples of dyadic boxes of `domain`.
// For a tuple, a point whose farthest distance to one box is below its
// nearest distance to every other box is served from that box wherever the
// centers sit, so those points form per-box convex problems bounded by
// ClusterSolver. The remaining points contribute their distance to the
// nearest box. A tuple is discarded once its bound shows it cannot beat the
// incumbent by more than `tolerance`.
class BoxSearch {
 public:
  BoxSearch(const PointSet& points, double r, Power z, std::size_t t, Box domain, double tolerance,
            std::uint64_t budget)
      : points_(points), r_(r), z_(z), t_(t), d_(points.dim()), n_(points.size()),
        domain_(std::move(domain)), tolerance_(tolerance), budget_(budget),
        solver_(points, r, z), eval_(points) {}

  void seed_incumbent(const PointSet& centers, double cost) {
    if (cost < incumbent_) {
      incumbent_ = cost;
      best_ = centers;
    }
  }

  void run() {
    const std::size_t max_level = std::min<std::size_t>(40, 62 / d_);
    std::vector<std::uint64_t> tuples(t_, 0);  // level 0: the whole domain, t times
    for (std::size_t level = 0;; ++level) {
      const std::size_t count = tuples.size() / t_;
      if (evaluations_ + count > budget_) {
        throw BudgetExceeded("continuous oracle refinement needs more than " +
                             std::to_string(budget_) +
                             " tuple evaluations; use a coarser resolution");
      }
      evaluations_ += count;
      prepare_boxes(level, tuples);

      std::vector<double> lower(count);
      for (std::size_t u = 0; u < count; ++u) lower[u] = bound_tuple(level, tuples.data() + u * t_);

      std::vector<std::uint64_t> survivors;
      for (std::size_t u = 0; u < count; ++u) {
        if (lower[u] < incumbent_ - tolerance_) {
          survivors.insert(survivors.end(), tuples.begin() + u * t_, tuples.begin() + (u + 1) * t_);
        }
      }
      polish_incumbent();
      if (survivors.empty()) return;
      if (level + 1 > max_level) {
        throw BudgetExceeded("continuous oracle refinement reached its depth limit");
      }
      tuples = children(survivors, level);
    }
  }

  double incumbent() const { return incumbent_; }
  const PointSet& best() const { return best_; }
  std::uint64_t evaluations() const { return evaluations_; }

  // Alternates nearest-center assignment with per-cluster minimization over
  // the domain. Only ever lowers the incumbent, so it just speeds pruning up.
  void polish_incumbent() {
    if (best_.empty() || polished_ == incumbent_) return;
    std::vector<double> lo = domain_.lo;
    std::vector<double> hi(d_);
    for (std::size_t j = 0; j < d_; ++j) hi[j] = domain_.lo[j] + domain_.extent[j];
    for (int round = 0; round < 50; ++round) {
      const Assignment assignment = assign_clusters(points_, best_);
      std::vector<std::vector<std::size_t>> clusters(best_.size());
      for (std::size_t i = 0; i < n_; ++i) clusters[assignment.owner[i]].push_back(i);
      PointSet moved(d_);
      for (std::size_t c = 0; c < best_.size(); ++c) {
        if (clusters[c].empty()) {
          moved.push_back(best_[c]);
        } else {
          const std::vector<double> start(best_[c].begin(), best_[c].end());
          moved.push_back(solver_.solve(clusters[c], lo, hi, &start).at);
        }
      }
      const double value = eval_.cost(moved, r_, z_);
      if (!(value < incumbent_)) break;
      incumbent_ = value;
      best_ = std::move(moved);
    }
    polished_ = incumbent_;
  }

 private:
  static constexpr std::size_t kMaxAssignments = 16;

  struct MemberKey {
    std::size_t slot;
    std::uint64_t mask;
    bool operator==(const MemberKey&) const = default;
  };
  struct MemberKeyHash {
    std::size_t operator()(const MemberKey& key) const {
      return std::hash<std::uint64_t>()(key.mask * 0x9e3779b97f4a7c15ULL ^ key.slot);
    }
  };

  double bound_tuple(std::size_t level, const std::uint64_t* tuple) {
    std::vector<std::size_t>& slots = scratch_slots_;
    slots.resize(t_);
    for (std::size_t s = 0; s < t_; ++s) slots[s] = slot_of_.at(tuple[s]);

    // Box s can hold the nearest center of point i only if its near distance
    // is at most the smallest far distance over the tuple.
    auto& groups = scratch_groups_;
    groups.assign(t_, {});
    struct Open {
      std::size_t point;
      std::vector<std::size_t> options;
    };
    std::vector<Open> open;
    double lb = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double reach = kInf;
      for (std::size_t s = 0; s < t_; ++s) reach = std::min(reach, far_sq_[slots[s] * n_ + i]);
      if (reach <= r_ * r_) continue;  // inside some ball wherever the centers sit
      Open entry{i, {}};
      for (std::size_t s = 0; s < t_; ++s) {
        if (near_sq_[slots[s] * n_ + i] <= reach) entry.options.push_back(s);
      }
      if (entry.options.size() == 1) {
        groups[entry.options[0]].push_back(i);
      } else {
        open.push_back(std::move(entry));
      }
    }

    // Undecided points are assigned explicitly while the number of
    // assignments stays small; the rest only pay their distance to the
    // nearest box.
    std::size_t combos = 1;
    std::size_t enumerated = 0;
    while (enumerated < open.size() && combos * open[enumerated].options.size() <= kMaxAssignments) {
      combos *= open[enumerated].options.size();
      ++enumerated;
    }
    for (std::size_t o = enumerated; o < open.size(); ++o) {
      double nearest = kInf;
      for (std::size_t s : open[o].options) nearest = std::min(nearest, near_terms_[slots[s] * n_ + open[o].point]);
      lb += nearest;
    }

    double best_part = kInf;
    std::vector<std::vector<double>> best_at;
    std::vector<std::size_t> digits(enumerated, 0);
    auto& members = scratch_members_;
    for (std::size_t combo = 0; combo < combos; ++combo) {
      members = groups;
      for (std::size_t o = 0; o < enumerated; ++o) {
        members[open[o].options[digits[o]]].push_back(open[o].point);
      }
      double part = 0.0;
      std::vector<std::vector<double>> at(t_);
      for (std::size_t s = 0; s < t_ && part < best_part; ++s) {
        if (members[s].empty()) {
          at[s] = midpoint(level, tuple[s]);
          continue;
        }
        std::sort(members[s].begin(), members[s].end());
        const ClusterBound bound = cluster_bound(slots[s], members[s]);
        part += bound.lower;
        at[s] = bound.at;
      }
      if (part < best_part) {
        best_part = part;
        best_at = std::move(at);
      }
      for (std::size_t o = 0; o < enumerated; ++o) {
        if (++digits[o] < open[o].options.size()) break;
        digits[o] = 0;
      }
    }
    lb += best_part;

    PointSet centers(d_);
    for (const auto& c : best_at) centers.push_back(c);
    const double ub = eval_.cost(centers, r_, z_);
    if (ub < incumbent_) {
      incumbent_ = ub;
      best_ = std::move(centers);
    }
    // Relative margin so rounding never lifts the bound above a true cost.
    return lb * (1.0 - 1e-10);
  }

  ClusterBound cluster_bound(std::size_t slot, const std::vector<std::size_t>& members) {
    if (n_ <= 64) {
      std::uint64_t mask = 0;
      for (std::size_t i : members) mask |= std::uint64_t{1} << i;
      const MemberKey key{slot, mask};
      auto it = bound_cache_.find(key);
      if (it == bound_cache_.end()) {
        it = bound_cache_.emplace(key, solver_.solve(members, box_lo_[slot], box_hi_[slot])).first;
      }
      return it->second;
    }
    return solver_.solve(members, box_lo_[slot], box_hi_[slot]);
  }

  std::vector<std::size_t> axis_indices(std::size_t level, std::uint64_t id) const {
    std::vector<std::size_t> idx(d_);
    const std::uint64_t mask = (std::uint64_t{1} << level) - 1;
    for (std::size_t j = 0; j < d_; ++j) idx[j] = static_cast<std::size_t>((id >> (level * j)) & mask);
    return idx;
  }

  std::vector<double> midpoint(std::size_t level, std::uint64_t id) const {
    const auto idx = axis_indices(level, id);
    const double parts = std::ldexp(1.0, static_cast<int>(level));
    std::vector<double> mid(d_);
    for (std::size_t j = 0; j < d_; ++j) {
      mid[j] = domain_.lo[j] + (static_cast<double>(idx[j]) + 0.5) * domain_.extent[j] / parts;
    }
    return mid;
  }

  void prepare_boxes(std::size_t level, const std::vector<std::uint64_t>& tuples) {
    slot_of_.clear();
    bound_cache_.clear();
    for (std::uint64_t id : tuples) slot_of_.emplace(id, slot_of_.size());
    const std::size_t slots = slot_of_.size();
    near_terms_.assign(slots * n_, 0.0);
    near_sq_.assign(slots * n_, 0.0);
    far_sq_.assign(slots * n_, 0.0);
    box_lo_.assign(slots, std::vector<double>(d_));
    box_hi_.assign(slots, std::vector<double>(d_));
    const double parts = std::ldexp(1.0, static_cast<int>(level));
    for (const auto& [id, slot] : slot_of_) {
      const auto idx = axis_indices(level, id);
      auto& lo = box_lo_[slot];
      auto& hi = box_hi_[slot];
      for (std::size_t j = 0; j < d_; ++j) {
        lo[j] = domain_.lo[j] + static_cast<double>(idx[j]) * domain_.extent[j] / parts;
        hi[j] = domain_.lo[j] + static_cast<double>(idx[j] + 1) * domain_.extent[j] / parts;
      }
      for (std::size_t i = 0; i < n_; ++i) {
        const auto p = points_[i];
        double near2 = 0.0;
        double far2 = 0.0;
        for (std::size_t j = 0; j < d_; ++j) {
          const double gap = p[j] < lo[j] ? lo[j] - p[j] : (p[j] > hi[j] ? p[j] - hi[j] : 0.0);
          const double reach = std::max(std::abs(p[j] - lo[j]), std::abs(p[j] - hi[j]));
          near2 += gap * gap;
          far2 += reach * reach;
        }
        near_sq_[slot * n_ + i] = near2;
        far_sq_[slot * n_ + i] = far2;
        near_terms_[slot * n_ + i] = term(near2, r_, z_);
      }
    }
  }

  std::uint64_t child_id(std::size_t level, std::uint64_t id, std::size_t which) const {
    const auto idx = axis_indices(level, id);
    std::uint64_t out = 0;
    for (std::size_t j = 0; j < d_; ++j) {
      const std::uint64_t c = 2 * idx[j] + ((which >> j) & 1U);
      out |= c << ((level + 1) * j);
    }
    return out;
  }

  std::vector<std::uint64_t> children(const std::vector<std::uint64_t>& parents, std::size_t level) {
    const std::size_t fan = std::size_t{1} << d_;
    std::vector<std::uint64_t> out;
    std::vector<std::size_t> pick(t_);
    std::vector<std::uint64_t> tuple(t_);
    for (std::size_t u = 0; u * t_ < parents.size(); ++u) {
      const std::uint64_t* parent = parents.data() + u * t_;
      // Odometer over child choices; equal parent boxes take non-decreasing
      // choices so every child multiset is produced once.
      std::fill(pick.begin(), pick.end(), 0);
      while (true) {
        bool canonical = true;
        for (std::size_t s = 1; s < t_; ++s) {
          if (parent[s] == parent[s - 1] && pick[s] < pick[s - 1]) {
            canonical = false;
            break;
          }
        }
        if (canonical) {
          for (std::size_t s = 0; s < t_; ++s) tuple[s] = child_id(level, parent[s], pick[s]);
          std::sort(tuple.begin(), tuple.end());
          out.insert(out.end(), tuple.begin(), tuple.end());
        }
        std::size_t s = 0;
        while (s < t_ && pick[s] + 1 == fan) {
          pick[s] = 0;
          ++s;
        }
        if (s == t_) break;
        ++pick[s];
      }
      if (out.size() / t_ + evaluations_ > budget_) {
        throw BudgetExceeded("continuous oracle refinement needs more than " +
                             std::to_string(budget_) +
                             " tuple evaluations; use a coarser resolution");
      }
    }
    return out;
  }

  const PointSet& points_;
  double r_;
  Power z_;
  std::size_t t_;
  std::size_t d_;
  std::size_t n_;
  Box domain_;
  double tolerance_;
  std::uint64_t budget_;
  ClusterSolver solver_;
  CostEvaluator eval_;
  std::uint64_t evaluations_ = 0;
  double incumbent_ = kInf;
  double polished_ = kInf;
  PointSet best_;
  std::unordered_map<std::uint64_t, std::size_t> slot_of_;
  std::vector<double> near_terms_;
  std::vector<double> near_sq_;
  std::vector<double> far_sq_;
  std::vector<std::vector<double>> box_lo_;
  std::vector<std::vector<double>> box_hi_;
  std::unordered_map<MemberKey, ClusterBound, MemberKeyHash> bound_cache_;
  std::vector<std::size_t> scratch_slots_;
  std::vector<std::vector<std::size_t>> scratch_groups_;
  std::vector<std::vector<std::size_t>> scratch_members_;
};

}  // namespace

OracleResult brute_force_discrete(const PointSet& points, int k, double r, Power z,
                                  const PointSet& candidates, std::uint64_t budget) {
  validate(points, k, r);
  if (candidates.empty()) throw InvalidInput("oracle needs at least one candidate");
  if (candidates.dim() != points.dim()) throw InvalidInput("candidate dimension mismatch");

  // Supersets never cost more, so subsets of exactly min(k, m) candidates suffice.
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());
  const std::uint64_t subsets = binomial_capped(candidates.size(), t, budget);
  if (subsets > budget) {
    throw BudgetExceeded("discrete oracle would enumerate more than " + std::to_string(budget) +
                         " subsets of " + std::to_string(candidates.size()) + " candidates");
  }

  SubsetSearch search(points, candidates, r, z, t);
  search.run();

  OracleResult out;
  out.centers = candidates.select(search.best());
  out.cost = cost(points, out.centers, r, z);
  out.candidate_count = candidates.size();
  return out;
}

constexpr std::uint64_t kPointSubsetCap = 1'000'000;

OracleResult brute_force_continuous(const PointSet& points, int k, double r, Power z,
                                    double resolution, std::uint64_t budget) {
  validate(points, k, r);
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw InvalidInput("resolution must be a positive finite real");
  }
  const std::size_t d = points.dim();
  Box domain{std::vector<double>(d, kInf), std::vector<double>(d, 0.0)};
  std::vector<double> hi(d, -kInf);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      domain.lo[j] = std::min(domain.lo[j], points[i][j]);
      hi[j] = std::max(hi[j], points[i][j]);
    }
  }

  // Cells of side 2*resolution/sqrt(d): a cell center is within `resolution`
  // of everything in its cell.
  const double side = 2.0 * resolution / std::sqrt(static_cast<double>(d));
  std::vector<std::uint64_t> cells(d);
  long double total = 1.0L;
  for (std::size_t j = 0; j < d; ++j) {
    domain.lo[j] -= r;
    const double extent = hi[j] + r - domain.lo[j];
    cells[j] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(extent / side)));
    domain.extent[j] = static_cast<double>(cells[j]) * side;
    total *= static_cast<long double>(cells[j]);
  }

  const std::size_t t_full = static_cast<std::size_t>(k);
  // Enumerate the grid directly when the work (subsets times points) is small.
  const std::uint64_t work_cap = 20'000'000;
  const bool direct =
      total <= 1e7L &&
      binomial_capped(static_cast<std::uint64_t>(total),
                      std::min<std::uint64_t>(t_full, static_cast<std::uint64_t>(total)),
                      budget) <= std::min(budget, work_cap / points.size());

  if (direct) {
    PointSet grid(d);
    const auto count = static_cast<std::size_t>(total);
    grid.reserve(count);
    std::vector<std::uint64_t> idx(d, 0);
    std::vector<double> center(d);
    for (std::size_t c = 0; c < count; ++c) {
      for (std::size_t j = 0; j < d; ++j) {
        center[j] = domain.lo[j] + (static_cast<double>(idx[j]) + 0.5) * side;
      }
      grid.push_back(center);
      for (std::size_t j = 0; j < d; ++j) {
        if (++idx[j] < cells[j]) break;
        idx[j] = 0;
      }
    }
    OracleResult out = brute_force_discrete(points, k, r, z, grid, budget);
    out.grid_resolution = resolution;
    // Centers on data points are often exactly optimal (a singleton, or k
    // coincident groups), so they are tried too.
    const std::size_t t_points = std::min(t_full, points.size());
    if (binomial_capped(points.size(), t_points, kPointSubsetCap) <= kPointSubsetCap) {
      SubsetSearch on_points(points, points, r, z, t_points);
      on_points.run();
      if (on_points.best_cost() < out.cost) {
        out.centers = points.select(on_points.best());
        out.cost = cost(points, out.centers, r, z);
      }
    }
    return out;
  }

  const std::size_t n = points.size();
  BoxSearch search(points, r, z, t_full, domain, static_cast<double>(n) * resolution, budget);
  const std::size_t t_points = std::min(t_full, n);
  if (binomial_capped(n, t_points, kPointSubsetCap) <= kPointSubsetCap) {
    SubsetSearch seed(points, points, r, z, t_points);
    seed.run();
    search.seed_incumbent(points.select(seed.best()), seed.best_cost());
    search.polish_incumbent();
  }
  search.run();

  OracleResult out;
  out.centers = search.best();
  out.cost = cost(points, out.centers, r, z);
  out.candidate_count = static_cast<std::size_t>(search.evaluations());
  out.grid_resolution = resolution;
  return out;
}

std::pair<Point, double> one_median_exact(const PointSet& points, double resolution, Power z,
                                          std::uint64_t budget) {
  OracleResult result = brute_force_continuous(points, 1, 0.0, z, resolution, budget);
  return {result.centers.point(0), result.cost};
}

namespace {

struct Ball {
  std::vector<double> center;
  double radius2 = -1.0;  // negative: empty ball
};

bool contains(const Ball& ball, std::span<const double> p) {
  if (ball.radius2 < 0.0) return false;
  const double d2 = sq_between(ball.center, p);
  return d2 <= ball.radius2 * (1.0 + 1e-12) + 1e-300;
}

// Smallest ball with every point of `boundary` on its surface, within their affine hull.
Ball circumball(const std::vector<std::span<const double>>& boundary, std::size_t d) {
  Ball ball;
  if (boundary.empty()) return ball;
  const auto q0 = boundary[0];
  ball.center.assign(q0.begin(), q0.end());
  ball.radius2 = 0.0;
  const std::size_t m = boundary.size() - 1;
  if (m == 0) return ball;

  std::vector<std::vector<double>> v(m, std::vector<double>(d));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t j = 0; j < d; ++j) v[a][j] = boundary[a + 1][j] - q0[j];
  }
  // Solve sum_b 2 (v_a . v_b) lambda_b = |v_a|^2 by Gaussian elimination.
  std::vector<std::vector<double>> sys(m, std::vector<double>(m + 1));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += v[a][j] * v[b][j];
      sys[a][b] = 2.0 * dot;
    }
    double norm2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) norm2 += v[a][j] * v[a][j];
    sys[a][m] = norm2;
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < m; ++row) {
      if (std::abs(sys[row][col]) > std::abs(sys[pivot][col])) pivot = row;
    }
    if (std::abs(sys[pivot][col]) < 1e-300) {
      ball.radius2 = -1.0;  // affinely dependent boundary
      return ball;
    }
    std::swap(sys[col], sys[pivot]);
    for (std::size_t row = 0; row < m; ++row) {
      if (row == col) continue;
      const double f = sys[row][col] / sys[col][col];
      for (std::size_t c = col; c <= m; ++c) sys[row][c] -= f * sys[col][c];
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    const double lambda = sys[a][m] / sys[a][a];
    for (std::size_t j = 0; j < d; ++j) ball.center[j] += lambda * v[a][j];
  }
  ball.radius2 = sq_between(ball.center, q0);
  return ball;
}

Ball welzl(std::vector<std::span<const double>>& pts, std::size_t count,
           std::vector<std::span<const double>>& boundary, std::size_t d) {
  if (count == 0 || boundary.size() == d + 1) return circumball(boundary, d);
  const auto p = pts[count - 1];
  Ball ball = welzl(pts, count - 1, boundary, d);
  if (contains(ball, p)) return ball;
  boundary.push_back(p);
  ball = welzl(pts, count - 1, boundary, d);
  boundary.pop_back();
  return ball;
}

}  // namespace

double min_enclosing_radius(const PointSet& points) {
  if (points.empty()) throw InvalidInput("enclosing ball of an empty set");
  std::vector<std::span<const double>> pts;
  for (std::size_t i = 0; i < points.size(); ++i) pts.push_back(points[i]);
  std::vector<std::span<const double>> boundary;
  const Ball ball = welzl(pts, pts.size(), boundary, points.dim());
  // Recheck coverage against the result; degenerate boundaries fall back to
  // the largest distance from the center.
  double r2 = std::max(ball.radius2, 0.0);
  for (const auto& p : pts) r2 = std::max(r2, sq_between(ball.center, p));
  return std::sqrt(r2);
}

double kcenter_radius_exact(const PointSet& points, int k) {
  const std::size_t n = points.size();
  if (n == 0) throw InvalidInput("k-center of an empty set");
  if (n > 16) throw BudgetExceeded("exact k-center oracle supports at most 16 points");
  if (k < 1) throw InvalidInput("k must be at least 1");

  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> meb(full + 1, 0.0);
  std::vector<std::size_t> members;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    members.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) members.push_back(i);
    }
    meb[mask] = min_enclosing_radius(points.select(members));
  }

  std::vector<double> best = meb;
  for (int j = 2; j <= k; ++j) {
    std::vector<double> next = best;
    for (std::size_t mask = 1; mask <= full; ++mask) {
      const std::size_t low = mask & (~mask + 1);
      const std::size_t rest = mask ^ low;
      // Part containing the lowest point: low plus any submask of the rest.
      for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
        const std::size_t part = sub | low;
        const std::size_t other = mask ^ part;
        if (other != 0) next[mask] = std::min(next[mask], std::max(meb[part], best[other]));
        if (sub == 0) break;
      }
    }
    best = std::move(next);
  }
  return best[full];
}

}  // namespace hybridk::oracle
