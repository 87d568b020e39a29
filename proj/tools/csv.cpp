#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace volterra::cli {

std::string format_csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  std::string s(buf);
  const auto e = s.find('e');
  const int exponent = std::atoi(s.c_str() + e + 1);
  return s.substr(0, e + 1) + std::to_string(exponent);
}

std::string csv_text(const Table& table) {
  if (table.rows.empty()) throw std::invalid_argument("emit_csv needs at least one sample");
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + table.header[i];
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw std::invalid_argument("CSV row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_csv_number(row[i]);
    out += '\n';
  }
  return out;
}

std::string csv_text(const std::vector<hardy::ProfileSample>& samples) {
  Table t{{"r", "value"}, {}};
  for (const auto& s : samples) t.rows.push_back({s.r, s.value});
  return csv_text(t);
}

namespace {

void write_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("write to '" + file.string() + "' failed");
}

}  // namespace

void emit_csv(const std::filesystem::path& file, const Table& table) { write_file(file, csv_text(table)); }

void emit_csv(const std::filesystem::path& file, const std::vector<hardy::ProfileSample>& samples) {
  write_file(file, csv_text(samples));
}

}  // namespace volterra::cli
