#include "ascnet/app/task.hpp"

#include <algorithm>

#include "ascnet/calib/thresholds.hpp"
#include "ascnet/common/error.hpp"
#include "ascnet/lex/lexicons.hpp"

namespace ascnet::app {

TaskSpec TaskSpec::make(const std::string& task, const std::string& emotion) {
  TaskSpec t;
  if (task == "V-reg") t.task = Task::v_reg;
  else if (task == "V-oc") t.task = Task::v_oc;
  else if (task == "EI-reg") t.task = Task::ei_reg;
  else if (task == "EI-oc") t.task = Task::ei_oc;
  else if (task == "E-c") t.task = Task::e_c;
  else throw UsageError("unknown task '" + task + "' (V-reg|V-oc|EI-reg|EI-oc|E-c)");
  if (t.emotion_task()) {
    const auto& em = lex::kAffectEmotions;
    if (std::find(em.begin(), em.end(), emotion) == em.end())
      throw UsageError(task + " needs --emotion anger|fear|joy|sadness" + (emotion.empty() ? "" : ", got '" + emotion + "'"));
    t.emotion = emotion;
  } else if (!emotion.empty()) {
    throw UsageError(task + " takes no emotion");
  }
  return t;
}

std::string TaskSpec::name() const {
  switch (task) {
    case Task::v_reg: return "V-reg";
    case Task::v_oc: return "V-oc";
    case Task::ei_reg: return "EI-reg";
    case Task::ei_oc: return "EI-oc";
    case Task::e_c: return "E-c";
  }
  return "?";
}

std::size_t TaskSpec::classes() const { return task == Task::v_oc ? 7 : task == Task::ei_oc ? 4 : 0; }

std::vector<double> TaskSpec::class_values() const {
  if (task == Task::v_oc) return calib::ordinal_values(-3, 3);
  if (task == Task::ei_oc) return calib::ordinal_values(0, 3);
  return {};
}

std::string TaskSpec::metric() const { return multilabel() ? "jaccard" : "pearson"; }

std::string TaskSpec::dimension() const {
  if (emotion_task()) return emotion;
  return multilabel() ? "emotions" : "valence";
}

double TaskSpec::class_to_unit(double c) const {
  const auto v = class_values();
  if (v.empty()) return c;
  return (c - v.front()) / (v.back() - v.front());
}

}  // namespace ascnet::app
