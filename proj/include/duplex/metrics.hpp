#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "duplex/interval.hpp"

namespace duplex {

template <typename Label>
struct MetricsReport {
  std::vector<Label> classes;
  double accuracy = 0;
  double macro_f1 = 0;
  std::map<Label, double> per_class_f1;
  std::vector<std::vector<long>> confusion;  // [true][predicted], in class order
};

/// Accuracy and macro-F1 over a fixed class set; zero-support classes score F1 = 0.
template <typename Label>
MetricsReport<Label> compute_metrics(const std::vector<Label>& predictions, const std::vector<Label>& labels,
                                     const std::vector<Label>& class_set) {
  if (predictions.size() != labels.size()) throw ValidationError("predictions and labels differ in length");
  if (labels.empty()) throw ValidationError("metrics need at least one item");
  if (class_set.empty()) throw ValidationError("class set is empty");
  std::map<Label, std::size_t> index;
  for (const auto& c : class_set) {
    if (!index.emplace(c, index.size()).second) throw ValidationError("class set has duplicates");
  }
  auto slot = [&](const Label& l) {
    const auto it = index.find(l);
    if (it == index.end()) throw ValidationError("label outside the class set");
    return it->second;
  };

  MetricsReport<Label> r;
  r.classes = class_set;
  const std::size_t k = class_set.size();
  r.confusion.assign(k, std::vector<long>(k, 0));
  for (std::size_t i = 0; i < labels.size(); ++i) ++r.confusion[slot(labels[i])][slot(predictions[i])];

  long correct = 0;
  for (std::size_t c = 0; c < k; ++c) correct += r.confusion[c][c];
  r.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());

  double sum = 0;
  for (std::size_t c = 0; c < k; ++c) {
    long predicted = 0, actual = 0;
    for (std::size_t j = 0; j < k; ++j) {
      predicted += r.confusion[j][c];
      actual += r.confusion[c][j];
    }
    const long tp = r.confusion[c][c];
    const double precision = predicted ? static_cast<double>(tp) / predicted : 0.0;
    const double recall = actual ? static_cast<double>(tp) / actual : 0.0;
    const double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    r.per_class_f1[class_set[c]] = f1;
    sum += f1;
  }
  r.macro_f1 = sum / static_cast<double>(k);
  return r;
}

}  // namespace duplex
