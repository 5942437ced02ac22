#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "ascnet/common/matrix.hpp"

namespace ascnet::heads {

// Per-column z-scoring with statistics from the training rows only
// (population standard deviation).
class Standardizer {
 public:
  Standardizer() = default;
  // A constant column is a DataError; `names` only labels the message.
  static Standardizer fit(const Matrix& train, const std::vector<std::string>& names = {});

  Matrix transform(const Matrix& x) const;
  std::size_t dim() const { return mean_.size(); }
  const std::vector<double>& means() const { return mean_; }
  const std::vector<double>& sds() const { return sd_; }

  nlohmann::json to_json() const;
  static Standardizer from_json(const nlohmann::json& j);

 private:
  std::vector<double> mean_, sd_;
};

}  // namespace ascnet::heads
