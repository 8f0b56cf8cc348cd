#pragma once

// File emission. Every file starts with a reproducibility header carrying the
// config hash and tolerance set: '#' comment lines in CSV and gnuplot files,
// a "provenance" object in JSON.

#include <filesystem>
#include <string>
#include <vector>

#include "gie/config.hpp"
#include "json.hpp"

namespace gie::io {

/// 17 significant digits with a '.' decimal separator, enough to round-trip
/// any double. NaN is written as "nan".
std::string format_number(double v);

struct Table {
  std::vector<std::string> comments;  // extra '#' lines after the header
  std::vector<std::string> columns;   // "name [unit]"
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

/// Unit labels for column headers.
struct UnitLabels {
  std::string time;  // "1/omega_tilde" or "s"
  std::string rate;  // "omega_tilde" or "rad/s"
  std::string length = "m";
};

UnitLabels unit_labels(const RunConfig& cfg);

class OutputSink {
 public:
  /// Creates `dir` if needed. An empty dir disables writing.
  OutputSink(std::filesystem::path dir, const RunConfig& cfg);

  bool enabled() const { return !dir_.empty(); }
  const std::string& config_hash() const { return hash_; }
  nlohmann::json provenance() const;
  std::vector<std::string> header_lines() const;

  /// Each returns the written path (empty when disabled).
  std::string write_csv(const std::string& name, const Table& table);
  std::string write_json(const std::string& name, nlohmann::json body);
  std::string write_text(const std::string& name, const std::string& text);

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::string hash_;
  Tolerances tol_;
  std::string config_name_;
  std::vector<std::string> written_;
};

/// Gnuplot script plotting several columns of a CSV against column 1.
std::string gnuplot_lines(const std::string& csv_name, const std::string& title,
                          const std::vector<std::string>& columns, const std::string& xlabel,
                          const std::vector<int>& y_columns);

/// Gnuplot heatmap of column `z_column` over columns 1 and 2.
std::string gnuplot_heatmap(const std::string& csv_name, const std::string& title,
                            const std::string& xlabel, const std::string& ylabel, int z_column);

}  // namespace gie::io
