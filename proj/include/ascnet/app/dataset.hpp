#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ascnet/app/task.hpp"
#include "ascnet/common/matrix.hpp"
#include "ascnet/text/pipeline.hpp"

namespace ascnet::app {

// semeval:     id<TAB>tweet<TAB>dimension<TAB>label   (label may be "2: ...")
// three_class: id<TAB>tweet<TAB>{-1,0,1}
// multilabel:  id<TAB>tweet<TAB>11 flags in anger..trust order
// A first row starting with "ID" is a header and skipped.
enum class Format { semeval, three_class, multilabel };
std::string to_string(Format f);
Format format_from_string(const std::string& s);
Format default_format(const TaskSpec& t);

struct Example {
  std::string id;
  std::string text;
  std::string dimension;
  double label = 0.0;          // score, ordinal class, or -1/0/1
  std::vector<double> labels;  // multilabel flags
};

struct Dataset {
  Format format = Format::semeval;
  bool ordinal = false;  // labels are classes rather than scores
  std::vector<Example> rows;

  std::vector<std::string> ids() const;
  std::vector<double> labels() const;
  Matrix label_matrix() const;
  std::vector<text::RawTweet> raw() const;
};

struct IngestOptions {
  std::optional<TaskSpec> task;  // enables label-domain checks
  bool compress_five = false;    // three_class: {-2,-1} -> -1, {1,2} -> 1
};

// Empty files, malformed rows (reported with their line number), duplicate
// ids and out-of-domain labels are DataErrors.
Dataset ingest(const std::filesystem::path& path, Format format, const IngestOptions& options = {});

// Class counts with whole-number percentages, e.g.
// "positive: 30097 (34%)". Regression labels get n/mean/min/max.
std::string distribution_report(const Dataset& d);

}  // namespace ascnet::app
