#include "swr/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace swr {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) fields.push_back(field);
  if (!line.empty() && line.back() == delim) fields.emplace_back();
  return fields;
}

double parse_field(const std::string& raw, const std::string& path, std::size_t line,
                   const std::string& column) {
  const char* begin = raw.data();
  const char* end = raw.data() + raw.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  double value = 0.0;
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw CsvError(path, line, column, "cannot parse '" + raw + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw CsvError(path, line, column, "value is not finite");
  }
  return value;
}

}  // namespace

CsvError::CsvError(const std::string& path, std::size_t line, const std::string& column,
                   const std::string& message)
    : std::runtime_error(path + ":" + std::to_string(line) + ": column '" + column +
                         "': " + message),
      line_(line) {}

LoadedDataset read_dataset_csv(const std::string& path, const CsvSpec& spec,
                               bool require_target) {
  std::ifstream in(path);
  if (!in) throw CsvError(path, 0, "-", "cannot open file");

  LoadedDataset data;
  std::string line;
  std::size_t line_no = 0;

  long time_idx = -1, x_idx = -1, y_idx = -1;
  if (spec.header) {
    if (!std::getline(in, line)) throw CsvError(path, 1, "-", "missing header line");
    ++line_no;
    const auto names = split_line(line, spec.delimiter);
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::string name = names[i];
      while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) name.pop_back();
      if (!spec.time_col.empty() && name == spec.time_col) time_idx = static_cast<long>(i);
      if (name == spec.input_col) x_idx = static_cast<long>(i);
      if (name == spec.target_col) y_idx = static_cast<long>(i);
    }
    if (x_idx < 0) {
      throw CsvError(path, 1, spec.input_col, "input column not found in header");
    }
    if (require_target && y_idx < 0) {
      throw CsvError(path, 1, spec.target_col, "target column not found in header");
    }
  } else {
    const bool with_time = !spec.time_col.empty();
    time_idx = with_time ? 0 : -1;
    x_idx = with_time ? 1 : 0;
    y_idx = x_idx + 1;  // may be past the row end; detected per row below
  }
  data.has_time = time_idx >= 0;

  bool y_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_line(line, spec.delimiter);
    const long width = static_cast<long>(fields.size());
    if (x_idx >= width) {
      throw CsvError(path, line_no, spec.input_col, "row has too few fields");
    }
    if (time_idx >= 0) {
      if (time_idx >= width) {
        throw CsvError(path, line_no, spec.time_col, "row has too few fields");
      }
      const double t = parse_field(fields[static_cast<std::size_t>(time_idx)], path,
                                   line_no, spec.time_col);
      if (!data.time.empty() && !(t > data.time.back())) {
        throw CsvError(path, line_no, spec.time_col,
                       "time stamps must be strictly increasing");
      }
      data.time.push_back(t);
    }
    data.x.push_back(
        parse_field(fields[static_cast<std::size_t>(x_idx)], path, line_no, spec.input_col));
    if (y_idx >= 0 && y_idx < width) {
      data.y.push_back(parse_field(fields[static_cast<std::size_t>(y_idx)], path, line_no,
                                   spec.target_col));
      y_seen = true;
    } else if (require_target) {
      throw CsvError(path, line_no, spec.target_col, "row has too few fields");
    } else if (y_seen) {
      throw CsvError(path, line_no, spec.target_col, "target present only in some rows");
    }
  }
  if (data.x.empty()) throw CsvError(path, line_no, spec.input_col, "no data rows");
  data.has_target = y_seen;
  return data;
}

void write_dataset_csv(const std::string& path, const std::vector<double>& x,
                       const std::vector<double>& y) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "time,x,y\n";
  for (std::size_t t = 0; t < x.size(); ++t) {
    out << t << ',' << format_double(x[t]) << ',' << format_double(y[t]) << '\n';
  }
}

void write_predictions_csv(const std::string& path, const LoadedDataset& data,
                           const Prediction& pred) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "time,x" << (data.has_target ? ",y" : "") << ",y_hat,valid\n";
  for (std::size_t t = 0; t < data.x.size(); ++t) {
    if (data.has_time) {
      out << format_double(data.time[t]);
    } else {
      out << t;
    }
    out << ',' << format_double(data.x[t]);
    if (data.has_target) out << ',' << format_double(data.y[t]);
    if (pred.is_valid(t)) {
      out << ',' << format_double(pred.values[t]) << ",1\n";
    } else {
      out << ",,0\n";
    }
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace swr
