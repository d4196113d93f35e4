#pragma once

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelprop/eval/confusion.hpp"

namespace labelprop::eval {

namespace detail {

// Percent with one decimal, the precision the benchmark tables use.
inline std::string percent(double fraction) {
  if (std::isnan(fraction)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
  return buf;
}

}  // namespace detail

/// CSV rendering: header row of coarse class names in mapping order with
/// mIoU last, then one row of percentages.
inline std::string report_csv(const IoUResult& result,
                              const std::vector<std::string>& class_names) {
  if (class_names.size() != result.per_class.size())
    throw std::invalid_argument("report: class name count mismatch");
  std::ostringstream out;
  for (const auto& name : class_names) out << name << ',';
  out << "mIoU\n";
  for (const double v : result.per_class) out << detail::percent(v) << ',';
  out << detail::percent(result.mean) << '\n';
  return out.str();
}

/// Fixed-width text table with the same column order as the CSV.
inline std::string report_text(const IoUResult& result,
                               const std::vector<std::string>& class_names) {
  if (class_names.size() != result.per_class.size())
    throw std::invalid_argument("report: class name count mismatch");
  std::vector<std::size_t> widths;
  std::ostringstream head, row;
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    const std::string value = detail::percent(result.per_class[c]);
    const std::size_t w = std::max(class_names[c].size(), value.size());
    head << std::setw(static_cast<int>(w)) << class_names[c] << "  ";
    row << std::setw(static_cast<int>(w)) << value << "  ";
  }
  const std::string miou = detail::percent(result.mean);
  head << std::setw(static_cast<int>(std::max<std::size_t>(4, miou.size())))
       << "mIoU";
  row << std::setw(static_cast<int>(std::max<std::size_t>(4, miou.size())))
      << miou;
  return head.str() + "\n" + row.str() + "\n";
}

struct ParsedReport {
  std::vector<std::string> class_names;  // without the trailing mIoU column
  std::vector<double> per_class;         // fractions; NaN for "-"
  double mean = 0.0;
};

/// Parses a report_csv rendering back into values.
inline ParsedReport parse_report_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string header, values;
  if (!std::getline(in, header) || !std::getline(in, values))
    throw std::runtime_error("report csv: expected two lines");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    return cells;
  };
  const auto names = split(header);
  const auto cells = split(values);
  if (names.size() != cells.size() || names.empty() || names.back() != "mIoU")
    throw std::runtime_error("report csv: malformed table");
  ParsedReport report;
  auto to_fraction = [](const std::string& cell) {
    if (cell == "-") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(cell) / 100.0;
  };
  for (std::size_t i = 0; i + 1 < names.size(); ++i) {
    report.class_names.push_back(names[i]);
    report.per_class.push_back(to_fraction(cells[i]));
  }
  report.mean = to_fraction(cells.back());
  return report;
}

}  // namespace labelprop::eval
