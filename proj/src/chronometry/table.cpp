#include "nuzi/chronometry/table.hpp"

namespace nuzi::chron {

int BirthTable::person_row(const std::string& label) const {
  for (size_t i = 0; i < person_labels.size(); ++i)
    if (person_labels[i] == label) return static_cast<int>(i);
  return -1;
}

int BirthTable::doc_row(const std::string& label) const {
  for (size_t i = 0; i < doc_labels.size(); ++i)
    if (doc_labels[i] == label) return static_cast<int>(i);
  return -1;
}

double BirthTable::mean_objective() const {
  double total = 0.0;
  for (double v : objectives) total += v;
  return objectives.empty() ? 0.0 : total / static_cast<double>(objectives.size());
}

}  // namespace nuzi::chron
