#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "swr/model.hpp"

namespace swr {

// Parse failure with the file position baked into the message.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& path, std::size_t line, const std::string& column,
           const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct CsvSpec {
  std::string time_col = "time";  // empty = no time column expected
  std::string input_col = "x";
  std::string target_col = "y";
  char delimiter = ',';
  bool header = true;  // without a header, columns are positional:
                       // [time,] input [, target]
};

struct LoadedDataset {
  std::vector<double> time;  // empty when the file has no time column
  std::vector<double> x;
  std::vector<double> y;  // empty when the target column is absent/not required
  bool has_time = false;
  bool has_target = false;
};

// Reads a dataset; all referenced columns must parse as finite reals and a
// present time column must be strictly increasing. With require_target the
// target column must exist.
LoadedDataset read_dataset_csv(const std::string& path, const CsvSpec& spec,
                               bool require_target = true);

void write_dataset_csv(const std::string& path, const std::vector<double>& x,
                       const std::vector<double>& y);

// predictions table: time, x, y (if known), y_hat, valid flag
void write_predictions_csv(const std::string& path, const LoadedDataset& data,
                           const Prediction& pred);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace swr
