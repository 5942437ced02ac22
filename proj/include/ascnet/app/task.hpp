#pragma once

#include <string>
#include <vector>

namespace ascnet::app {

enum class Task { v_reg, v_oc, ei_reg, ei_oc, e_c };

struct TaskSpec {
  Task task = Task::v_reg;
  std::string emotion;  // EI tasks only

  // "V-reg", "V-oc", "EI-reg", "EI-oc", "E-c"; EI tasks need an emotion
  // and the others refuse one.
  static TaskSpec make(const std::string& task, const std::string& emotion = "");

  std::string name() const;
  bool ordinal() const { return task == Task::v_oc || task == Task::ei_oc; }
  bool multilabel() const { return task == Task::e_c; }
  bool emotion_task() const { return task == Task::ei_reg || task == Task::ei_oc; }
  // 7 for V-oc, 4 for EI-oc, 0 otherwise.
  std::size_t classes() const;
  std::vector<double> class_values() const;
  std::string metric() const;     // "pearson" or "jaccard"
  std::string dimension() const;  // "valence", the emotion, or "emotions"
  // Ordinal class -> [0,1] regression target (lowest 0, highest 1).
  double class_to_unit(double c) const;
};

}  // namespace ascnet::app
