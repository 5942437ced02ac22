#pragma once

#include <span>
#include <vector>

#include "json.hpp"

namespace ascnet::calib {

// k ordinal classes separated by k-1 strictly increasing cuts. A score
// equal to a cut belongs to the upper class.
struct CalibrationThresholds {
  std::vector<double> cuts;
  std::vector<double> class_values;  // ascending, size cuts.size() + 1

  std::size_t k() const { return class_values.size(); }
  void validate() const;
  nlohmann::json to_json() const;
  static CalibrationThresholds from_json(const nlohmann::json& j);
};

// -3..3 for valence, 0..3 for emotion intensity.
std::vector<double> ordinal_values(int lo, int hi);

struct GridSearchOptions {
  std::size_t max_candidates = 200;       // beyond this, a uniform grid over [0,1]
  double exhaustive_limit = 2e6;          // largest subset count searched exhaustively
  std::size_t beam_width = 1000;
  double tie_tolerance = 1e-12;           // Pearson gaps below this are ties
};

struct GridSearchResult {
  CalibrationThresholds thresholds;
  double pearson = 0.0;
  bool exhaustive = true;
  std::size_t evaluated = 0;
};

// Midpoints between consecutive distinct sorted scores.
std::vector<double> midpoint_candidates(std::span<const double> scores);

// Cuts maximizing Pearson(assigned class values, gold) over (k-1)-subsets of
// the candidate cuts; ties go to the lexicographically smallest cuts.
GridSearchResult grid_search_thresholds(std::span<const double> scores, std::span<const double> gold,
                                        const std::vector<double>& class_values,
                                        const GridSearchOptions& options = {});

// Cuts at equal-count positions of the sorted scores (midpoints, moved past
// ties).
CalibrationThresholds equal_frequency_thresholds(std::span<const double> scores,
                                                 const std::vector<double>& class_values);

std::vector<double> apply_thresholds(std::span<const double> scores, const CalibrationThresholds& t);
double apply_threshold(double score, const CalibrationThresholds& t);

}  // namespace ascnet::calib
