#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace nuzi::chron {

/// Solved chronology: per person the birth/death year of every replication,
/// per document the published year. The mean columns of the reports are
/// always the arithmetic means of these rows.
struct BirthTable {
  int replications = 0;
  std::vector<std::string> person_labels;
  std::vector<std::string> doc_labels;
  Eigen::MatrixXd births;     // persons x R
  Eigen::MatrixXd deaths;     // persons x R
  Eigen::MatrixXd published;  // docs x R
  std::vector<double> objectives;  // least-squares value per replication

  int person_row(const std::string& label) const;  // -1 when absent
  int doc_row(const std::string& label) const;
  double birth_mean(int row) const { return births.row(row).mean(); }
  double death_mean(int row) const { return deaths.row(row).mean(); }
  double published_mean(int row) const { return published.row(row).mean(); }
  double mean_objective() const;
};

struct UnknownPerson : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownDocument : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nuzi::chron
