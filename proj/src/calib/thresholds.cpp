#include "ascnet/calib/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ascnet/calib/metrics.hpp"
#include "ascnet/common/error.hpp"

namespace ascnet::calib {

void CalibrationThresholds::validate() const {
  if (class_values.size() < 2) throw DataError("thresholds need at least two classes");
  if (cuts.size() + 1 != class_values.size())
    throw DataError("thresholds: " + std::to_string(cuts.size()) + " cuts for " + std::to_string(class_values.size()) + " classes");
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (!(cuts[i] > 0.0 && cuts[i] < 1.0)) throw DataError("threshold cut outside (0,1)");
    if (i > 0 && !(cuts[i] > cuts[i - 1])) throw DataError("threshold cuts must be strictly increasing");
  }
  for (std::size_t i = 1; i < class_values.size(); ++i)
    if (!(class_values[i] > class_values[i - 1])) throw DataError("class values must be strictly ascending");
}

nlohmann::json CalibrationThresholds::to_json() const { return {{"cuts", cuts}, {"class_values", class_values}}; }

CalibrationThresholds CalibrationThresholds::from_json(const nlohmann::json& j) {
  CalibrationThresholds t;
  try {
    t.cuts = j.at("cuts").get<std::vector<double>>();
    t.class_values = j.at("class_values").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad thresholds record: ") + e.what());
  }
  t.validate();
  return t;
}

std::vector<double> ordinal_values(int lo, int hi) {
  std::vector<double> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

std::vector<double> midpoint_candidates(std::span<const double> scores) {
  std::vector<double> s(scores.begin(), scores.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<double> out;
  for (std::size_t i = 1; i < s.size(); ++i) out.push_back(s[i - 1] + (s[i] - s[i - 1]) / 2.0);
  return out;
}

namespace {

// Pearson of a partition of the sorted scores, from prefix sums of gold.
class PartitionScorer {
 public:
  PartitionScorer(std::span<const double> scores, std::span<const double> gold, const std::vector<double>& values)
      : values_(values) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
    sorted_.reserve(order.size());
    prefix_.assign(order.size() + 1, 0.0);
    for (std::size_t i = 0; i < order.size(); ++i) {
      sorted_.push_back(scores[order[i]]);
      prefix_[i + 1] = prefix_[i] + gold[order[i]];
      gg_ += gold[order[i]] * gold[order[i]];
    }
    n_ = static_cast<double>(order.size());
    g_ = prefix_.back();
  }

  // Scores strictly below the cut.
  std::size_t position(double cut) const {
    return static_cast<std::size_t>(std::lower_bound(sorted_.begin(), sorted_.end(), cut) - sorted_.begin());
  }

  // `pos` holds the boundary of each cut; the bins after the last boundary
  // take class `pos.size()`. -inf when only one bin is populated.
  double score(const std::vector<std::size_t>& pos) const {
    double sx = 0, sxx = 0, sxy = 0;
    std::size_t begin = 0, nonempty = 0;
    for (std::size_t j = 0; j <= pos.size(); ++j) {
      const std::size_t end = j < pos.size() ? pos[j] : sorted_.size();
      const double cnt = static_cast<double>(end - begin);
      if (cnt > 0) {
        ++nonempty;
        const double v = values_[j];
        sx += v * cnt;
        sxx += v * v * cnt;
        sxy += v * (prefix_[end] - prefix_[begin]);
      }
      begin = end;
    }
    if (nonempty < 2) return -std::numeric_limits<double>::infinity();
    const double cov = sxy - sx * g_ / n_;
    const double vx = sxx - sx * sx / n_;
    const double vy = gg_ - g_ * g_ / n_;
    return cov / std::sqrt(vx * vy);
  }

 private:
  const std::vector<double>& values_;
  std::vector<double> sorted_, prefix_;
  double n_ = 0, g_ = 0, gg_ = 0;
};

double choose(std::size_t m, std::size_t r) {
  if (r > m) return 0.0;
  double c = 1.0;
  for (std::size_t i = 0; i < r; ++i) c = c * static_cast<double>(m - i) / static_cast<double>(i + 1);
  return c;
}

struct Beam {
  std::vector<std::size_t> idx;  // candidate indices
  double value;
};

}  // namespace

GridSearchResult grid_search_thresholds(std::span<const double> scores, std::span<const double> gold,
                                        const std::vector<double>& class_values, const GridSearchOptions& options) {
  const std::size_t k = class_values.size();
  if (k < 2) throw UsageError("grid search needs at least two classes");
  if (scores.size() != gold.size()) throw DataError("scores and gold labels differ in count");
  if (scores.size() < k) throw DataError("grid search needs at least k=" + std::to_string(k) + " scores");
  for (double s : scores)
    if (!(s >= 0.0 && s <= 1.0)) throw DataError("scores must lie in [0,1]");
  for (double g : gold)
    if (std::find(class_values.begin(), class_values.end(), g) == class_values.end())
      throw DataError("gold label " + std::to_string(g) + " is not one of the class values");
  if (std::all_of(gold.begin(), gold.end(), [&](double g) { return g == gold[0]; }))
    throw NumericalError("undefined correlation: gold labels are constant");

  std::vector<double> cand = midpoint_candidates(scores);
  if (cand.size() > options.max_candidates) {
    cand.clear();
    for (std::size_t i = 0; i < options.max_candidates; ++i)
      cand.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(options.max_candidates));
  }
  const std::size_t r = k - 1, m = cand.size();
  if (m < r)
    throw DataError("only " + std::to_string(m + 1) + " distinct scores; cannot place " + std::to_string(r) + " cuts");

  PartitionScorer scorer(scores, gold, class_values);
  std::vector<std::size_t> cpos(m);
  for (std::size_t i = 0; i < m; ++i) cpos[i] = scorer.position(cand[i]);
  auto eval = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> pos(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) pos[j] = cpos[idx[j]];
    return scorer.score(pos);
  };

  GridSearchResult res;
  std::vector<std::size_t> best;
  double best_value = -std::numeric_limits<double>::infinity();
  auto offer = [&](const std::vector<std::size_t>& idx, double v) {
    ++res.evaluated;
    if (best.empty() || v > best_value + options.tie_tolerance) {
      best = idx;
      best_value = v;
    }
  };

  if (choose(m, r) <= options.exhaustive_limit) {
    // Lexicographic enumeration, so the first of tied maxima is kept.
    std::vector<std::size_t> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      offer(idx, eval(idx));
      std::size_t j = r;
      while (j > 0 && idx[j - 1] == m - r + j - 1) --j;
      if (j == 0) break;
      ++idx[j - 1];
      for (std::size_t t = j; t < r; ++t) idx[t] = idx[t - 1] + 1;
    }
  } else {
    res.exhaustive = false;
    auto ranked = [&](const Beam& a, const Beam& b) { return a.value > b.value || (a.value == b.value && a.idx < b.idx); };
    std::vector<Beam> beam;
    for (std::size_t i = 0; i + r <= m; ++i) beam.push_back({{i}, eval({i})});
    for (std::size_t depth = 1; depth < r; ++depth) {
      std::sort(beam.begin(), beam.end(), ranked);
      if (beam.size() > options.beam_width) beam.resize(options.beam_width);
      std::vector<Beam> next;
      for (const auto& b : beam)
        for (std::size_t i = b.idx.back() + 1; i + (r - depth) <= m; ++i) {
          auto idx = b.idx;
          idx.push_back(i);
          next.push_back({idx, eval(idx)});
        }
      beam = std::move(next);
    }
    std::sort(beam.begin(), beam.end(), [](const Beam& a, const Beam& b) { return a.idx < b.idx; });
    for (const auto& b : beam) offer(b.idx, b.value);
  }

  res.thresholds.class_values = class_values;
  for (auto i : best) res.thresholds.cuts.push_back(cand[i]);
  if (!res.exhaustive) {
    // The approximate search never returns less than equal-count binning.
    try {
      auto eq = equal_frequency_thresholds(scores, class_values);
      std::vector<std::size_t> pos;
      for (double c : eq.cuts) pos.push_back(scorer.position(c));
      if (scorer.score(pos) > best_value + options.tie_tolerance) {
        res.thresholds = eq;
        best_value = scorer.score(pos);
      }
    } catch (const DataError&) {
    }
  }
  if (!std::isfinite(best_value)) throw NumericalError("undefined correlation: no cut set separates the scores");
  res.thresholds.validate();
  res.pearson = pearson(apply_thresholds(scores, res.thresholds), gold);
  return res;
}

CalibrationThresholds equal_frequency_thresholds(std::span<const double> scores, const std::vector<double>& class_values) {
  const std::size_t k = class_values.size(), n = scores.size();
  if (k < 2 || n < k) throw DataError("equal-frequency binning needs at least k scores");
  std::vector<double> s(scores.begin(), scores.end());
  std::sort(s.begin(), s.end());
  CalibrationThresholds t;
  t.class_values = class_values;
  std::size_t prev = 0;
  for (std::size_t j = 1; j < k; ++j) {
    std::size_t p = std::max((j * n + k / 2) / k, prev + 1);
    while (p < n && s[p] == s[p - 1]) ++p;
    if (p >= n) throw DataError("too many tied scores for " + std::to_string(k) + " equal-count bins");
    t.cuts.push_back(s[p - 1] + (s[p] - s[p - 1]) / 2.0);
    prev = p;
  }
  return t;
}

double apply_threshold(double score, const CalibrationThresholds& t) {
  const auto above = static_cast<std::size_t>(std::upper_bound(t.cuts.begin(), t.cuts.end(), score) - t.cuts.begin());
  return t.class_values[above];
}

std::vector<double> apply_thresholds(std::span<const double> scores, const CalibrationThresholds& t) {
  t.validate();
  std::vector<double> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(apply_threshold(s, t));
  return out;
}

}  // namespace ascnet::calib
