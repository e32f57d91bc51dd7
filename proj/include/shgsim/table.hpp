#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shgsim/version.hpp"

namespace shgsim {

inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Comma-separated table with a '#'-prefixed metadata preamble and a header
/// row; deterministic output, newline-terminated.
class TableWriter {
 public:
  void add_metadata(const std::string& key, const std::string& value) {
    metadata_.emplace_back(key, value);
  }
  void set_header(std::vector<std::string> columns) { header_ = std::move(columns); }
  void add_row(const std::vector<double>& values) {
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) row += ',';
      row += format_value(values[i]);
    }
    rows_.push_back(std::move(row));
  }

  std::string str() const {
    std::ostringstream out;
    out << "# tool = " << tool_name << " " << tool_version << "\n";
    for (const auto& [k, v] : metadata_) out << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < header_.size(); ++i)
      out << (i ? "," : "") << header_[i];
    out << "\n";
    for (const auto& row : rows_) out << row << "\n";
    return out.str();
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
    out << str();
    if (!out) throw std::runtime_error("failed while writing '" + path + "'");
  }

 private:
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

/// Key-value summary record next to the main table (headline numbers).
class SummaryWriter {
 public:
  void add(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
  }
  void add(const std::string& key, double value) { add(key, format_value(value)); }

  std::string str() const {
    std::ostringstream out;
    out << "tool = " << tool_name << " " << tool_version << "\n";
    for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
    return out.str();
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary file '" + path + "'");
    out << str();
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace shgsim
