#pragma once

// Independent reference computations for the calibration checks; kept
// deliberately naive.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace fixtures {

inline double naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - sx / n) * (y[i] - sy / n);
    vx += (x[i] - sx / n) * (x[i] - sx / n);
    vy += (y[i] - sy / n) * (y[i] - sy / n);
  }
  return cov / std::sqrt(vx * vy);
}

struct BruteForceCut {
  std::vector<double> cuts;
  double pearson = -1e300;
};

// Every (k-1)-subset of the midpoints, in lexicographic order; only a
// strictly better Pearson (beyond `tie`) replaces the incumbent.
inline BruteForceCut brute_force_cuts(const std::vector<double>& scores, const std::vector<double>& gold,
                                      const std::vector<double>& values, double tie = 1e-12) {
  std::vector<double> s = scores;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<double> mids;
  for (std::size_t i = 1; i < s.size(); ++i) mids.push_back(s[i - 1] + (s[i] - s[i - 1]) / 2.0);

  BruteForceCut best;
  bool have = false;
  std::vector<double> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (chosen.size() + 1 == values.size()) {
      std::vector<double> assigned;
      for (double x : scores) {
        std::size_t c = 0;
        for (double cut : chosen) c += x >= cut;
        assigned.push_back(values[c]);
      }
      if (std::all_of(assigned.begin(), assigned.end(), [&](double a) { return a == assigned[0]; })) return;
      const double r = naive_pearson(assigned, gold);
      if (!have || r > best.pearson + tie) {
        best = {chosen, r};
        have = true;
      }
      return;
    }
    for (std::size_t i = from; i < mids.size(); ++i) {
      chosen.push_back(mids[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return best;
}

}  // namespace fixtures
