#include "gie/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gie/errors.hpp"

namespace gie::io {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorCode::DimensionMismatch, "row width does not match the header");
  }
  rows.push_back(std::move(row));
}

UnitLabels unit_labels(const RunConfig& cfg) {
  if (cfg.si) return {"s", "rad/s"};
  return {"1/omega_tilde", "omega_tilde"};
}

OutputSink::OutputSink(fs::path dir, const RunConfig& cfg)
    : dir_(std::move(dir)), hash_(io::config_hash(cfg)), tol_(cfg.tolerances), config_name_(cfg.name) {
  if (!enabled()) return;
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) {
    throw Error(ErrorCode::IoError, "cannot create output directory '" + dir_.string() + "'");
  }
}

nlohmann::json OutputSink::provenance() const {
  return {{"code_version", GIE_VERSION_STRING},
          {"config_hash", hash_},
          {"config_name", config_name_},
          {"tolerances",
           {{"fock_tail", tol_.fock_tail},
            {"convergence", tol_.convergence},
            {"en_clamp", tol_.en_clamp},
            {"n_start", tol_.n_start},
            {"n_max", tol_.n_max}}}};
}

std::vector<std::string> OutputSink::header_lines() const {
  std::ostringstream tol;
  tol << "tolerances: fock_tail=" << format_number(tol_.fock_tail)
      << " convergence=" << format_number(tol_.convergence)
      << " en_clamp=" << format_number(tol_.en_clamp) << " n_start=" << tol_.n_start
      << " n_max=" << tol_.n_max;
  return {std::string("gie ") + GIE_VERSION_STRING, "config: " + config_name_,
          "config_hash: " + hash_, tol.str()};
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

}  // namespace

std::string OutputSink::write_csv(const std::string& name, const Table& table) {
  if (!enabled()) return {};
  std::ostringstream os;
  for (const auto& line : header_lines()) os << "# " << line << '\n';
  for (const auto& line : table.comments) os << "# " << line << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  const fs::path path = dir_ / name;
  write_file(path, os.str());
  written_.push_back(path.string());
  return path.string();
}

std::string OutputSink::write_json(const std::string& name, nlohmann::json body) {
  if (!enabled()) return {};
  body["provenance"] = provenance();
  const fs::path path = dir_ / name;
  write_file(path, body.dump(2) + "\n");
  written_.push_back(path.string());
  return path.string();
}

std::string OutputSink::write_text(const std::string& name, const std::string& text) {
  if (!enabled()) return {};
  std::ostringstream os;
  for (const auto& line : header_lines()) os << "# " << line << '\n';
  os << text;
  const fs::path path = dir_ / name;
  write_file(path, os.str());
  written_.push_back(path.string());
  return path.string();
}

std::string gnuplot_lines(const std::string& csv_name, const std::string& title,
                          const std::vector<std::string>& columns, const std::string& xlabel,
                          const std::vector<int>& y_columns) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key autotitle columnhead\n"
     << "set title '" << title << "'\n"
     << "set xlabel '" << xlabel << "'\n"
     << "set ylabel 'EN'\n"
     << "plot";
  for (std::size_t i = 0; i < y_columns.size(); ++i) {
    const int c = y_columns[i];
    os << (i ? ", \\\n    " : " ") << "'" << csv_name << "' using 1:" << c
       << " with lines title '" << columns.at(std::size_t(c - 1)) << "'";
  }
  os << '\n';
  return os.str();
}

std::string gnuplot_heatmap(const std::string& csv_name, const std::string& title,
                            const std::string& xlabel, const std::string& ylabel, int z_column) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set title '" << title << "'\n"
     << "set xlabel '" << xlabel << "'\n"
     << "set ylabel '" << ylabel << "'\n"
     << "set cblabel 'EN'\n"
     << "set view map\n"
     << "splot '" << csv_name << "' every ::1 using 1:2:" << z_column
     << " with points pointtype 5 pointsize 1 palette notitle\n";
  return os.str();
}

}  // namespace gie::io
