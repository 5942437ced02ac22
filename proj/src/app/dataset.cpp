#include "ascnet/app/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ascnet/common/error.hpp"
#include "ascnet/common/strings.hpp"
#include "ascnet/heads/heads.hpp"

namespace ascnet::app {

std::string to_string(Format f) {
  switch (f) {
    case Format::semeval: return "semeval";
    case Format::three_class: return "three_class";
    case Format::multilabel: return "multilabel";
  }
  return "?";
}

Format format_from_string(const std::string& s) {
  if (s == "semeval") return Format::semeval;
  if (s == "three_class") return Format::three_class;
  if (s == "multilabel") return Format::multilabel;
  throw UsageError("unknown data format '" + s + "' (semeval|three_class|multilabel)");
}

Format default_format(const TaskSpec& t) { return t.multilabel() ? Format::multilabel : Format::semeval; }

std::vector<std::string> Dataset::ids() const {
  std::vector<std::string> out;
  for (const auto& r : rows) out.push_back(r.id);
  return out;
}

std::vector<double> Dataset::labels() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.label);
  return out;
}

Matrix Dataset::label_matrix() const {
  const std::size_t cols = rows.empty() ? 0 : rows[0].labels.size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].labels.begin(), rows[i].labels.end(), m.row(i).begin());
  return m;
}

std::vector<text::RawTweet> Dataset::raw() const {
  std::vector<text::RawTweet> out;
  for (const auto& r : rows) out.push_back({r.id, r.text});
  return out;
}

namespace {

[[noreturn]] void fail(const std::filesystem::path& p, std::size_t line, const std::string& msg) {
  throw DataError(p.string() + ":" + std::to_string(line) + ": " + msg);
}

bool is_integral(double v) { return std::floor(v) == v; }

}  // namespace

Dataset ingest(const std::filesystem::path& path, Format format, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  Dataset d;
  d.format = format;
  const auto& task = options.task;
  if (task && task->multilabel() != (format == Format::multilabel))
    throw UsageError("task " + task->name() + " cannot read " + to_string(format) + " files");
  d.ordinal = task ? task->ordinal() : false;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (str::trim(line).empty()) continue;
    auto f = str::split(line, '\t');
    if (first) {
      first = false;
      if (str::starts_with_ci(f[0], "id") && f[0].size() == 2) {
        if (format == Format::multilabel) {
          if (f.size() != 13) fail(path, lineno, "header must list 11 emotions");
          for (std::size_t i = 0; i < 11; ++i)
            if (str::to_lower(str::trim(f[i + 2])) != heads::kEmotionLabels[i])
              fail(path, lineno, "header column " + std::to_string(i + 3) + " should be " + heads::kEmotionLabels[i]);
        }
        continue;
      }
    }
    Example ex;
    const std::size_t want = format == Format::semeval ? 4 : format == Format::three_class ? 3 : 13;
    if (f.size() != want)
      fail(path, lineno, "expected " + std::to_string(want) + " tab-separated fields, found " + std::to_string(f.size()));
    ex.id = std::string(str::trim(f[0]));
    ex.text = f[1];
    if (ex.id.empty()) fail(path, lineno, "empty id");
    if (!seen.insert(ex.id).second) fail(path, lineno, "duplicate id '" + ex.id + "'");
    try {
      if (format == Format::semeval) {
        ex.dimension = str::to_lower(str::trim(f[2]));
        std::string_view lab = str::trim(f[3]);
        const auto colon = lab.find(':');
        if (colon != std::string_view::npos) {
          ex.label = static_cast<double>(str::parse_int(str::trim(lab.substr(0, colon))));
          d.ordinal = true;
        } else {
          ex.label = str::parse_double(lab);
        }
        if (task) {
          if (ex.dimension != task->dimension())
            fail(path, lineno, "dimension '" + ex.dimension + "' does not match task " + task->name() + " (" + task->dimension() + ")");
          if (task->ordinal()) {
            const auto v = task->class_values();
            if (std::find(v.begin(), v.end(), ex.label) == v.end())
              fail(path, lineno, "class " + std::string(lab) + " outside " + str::format_double(v.front()) + ".." + str::format_double(v.back()));
          } else if (!(ex.label >= 0.0 && ex.label <= 1.0)) {
            fail(path, lineno, "score " + std::string(lab) + " outside [0,1]");
          }
        }
      } else if (format == Format::three_class) {
        long long v = str::parse_int(str::trim(f[2]));
        if (options.compress_five) {
          if (v < -2 || v > 2) fail(path, lineno, "label " + std::to_string(v) + " outside -2..2");
          v = v < 0 ? -1 : v > 0 ? 1 : 0;
        } else if (v < -1 || v > 1) {
          fail(path, lineno, "label " + std::to_string(v) + " outside -1..1");
        }
        ex.label = static_cast<double>(v);
        d.ordinal = true;
      } else {
        for (std::size_t i = 2; i < 13; ++i) {
          const double v = str::parse_double(str::trim(f[i]));
          if (v != 0.0 && v != 1.0) fail(path, lineno, "emotion flags must be 0 or 1");
          ex.labels.push_back(v);
        }
      }
    } catch (const DataError& e) {
      const std::string msg = e.what();
      if (msg.rfind(path.string() + ":", 0) == 0) throw;
      fail(path, lineno, msg);
    }
    d.rows.push_back(std::move(ex));
  }
  if (d.rows.empty()) throw DataError(path.string() + ": no data rows");
  if (d.ordinal)
    for (const auto& r : d.rows)
      if (!is_integral(r.label)) throw DataError(path.string() + ": mixes class labels and scores");
  return d;
}

std::string distribution_report(const Dataset& d) {
  std::ostringstream out;
  const double n = static_cast<double>(d.rows.size());
  auto pct = [&](std::size_t c) { return std::to_string(static_cast<long long>(std::llround(100.0 * static_cast<double>(c) / n))) + "%"; };
  if (d.format == Format::multilabel) {
    for (std::size_t i = 0; i < heads::kEmotionLabels.size(); ++i) {
      std::size_t c = 0;
      for (const auto& r : d.rows) c += r.labels[i] == 1.0;
      out << heads::kEmotionLabels[i] << ": " << c << " (" << pct(c) << ")\n";
    }
  } else if (d.format == Format::three_class) {
    const std::pair<const char*, double> classes[] = {{"positive", 1}, {"neutral", 0}, {"negative", -1}};
    for (const auto& [name, v] : classes) {
      std::size_t c = 0;
      for (const auto& r : d.rows) c += r.label == v;
      out << name << ": " << c << " (" << pct(c) << ")\n";
    }
  } else if (d.ordinal) {
    std::map<long long, std::size_t> counts;
    for (const auto& r : d.rows) counts[static_cast<long long>(r.label)]++;
    for (const auto& [k, c] : counts) out << "class " << k << ": " << c << " (" << pct(c) << ")\n";
  } else {
    double sum = 0, lo = d.rows[0].label, hi = lo;
    for (const auto& r : d.rows) {
      sum += r.label;
      lo = std::min(lo, r.label);
      hi = std::max(hi, r.label);
    }
    out << "mean: " << str::format_double(sum / n) << "\nmin: " << str::format_double(lo)
        << "\nmax: " << str::format_double(hi) << "\n";
  }
  out << "total: " << d.rows.size() << "\n";
  return out.str();
}

}  // namespace ascnet::app
