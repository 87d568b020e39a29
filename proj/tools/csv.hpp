#ifndef VOLTERRA_TOOLS_CSV_HPP
#define VOLTERRA_TOOLS_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "volterra/hardy.hpp"

namespace volterra::cli {

/// 17 significant digits, exponent without sign padding: 5.0000000000000000e-1.
std::string format_csv_number(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header line plus one line per row, LF terminated. Throws on an empty table.
std::string csv_text(const Table& table);
std::string csv_text(const std::vector<hardy::ProfileSample>& samples);

void emit_csv(const std::filesystem::path& file, const Table& table);
void emit_csv(const std::filesystem::path& file, const std::vector<hardy::ProfileSample>& samples);

}  // namespace volterra::cli

#endif
