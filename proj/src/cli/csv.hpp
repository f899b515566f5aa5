#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace seqdisc::cli {

/// One CSV cell: a number printed with 17 significant digits, a label, or
/// empty (NaN prints as an empty field).
using Cell = std::variant<double, std::string>;

inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
    row(std::vector<Cell>(header.begin(), header.end()));
  }

  void row(const std::vector<Cell>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      if (const double* d = std::get_if<double>(&cells[i])) out_ << format_number(*d);
      else out_ << std::get<std::string>(cells[i]);
    }
    out_ << "\r\n";
  }

 private:
  std::ostream& out_;
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace seqdisc::cli
