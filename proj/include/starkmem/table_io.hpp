#pragma once

// Numeric CSV tables. Numbers are written with 9 significant digits and
// a period decimal separator regardless of the process locale.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace starkmem {

std::string format_number(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a header column; throws FormatError when absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> column_values(const std::string& name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);

/// Parses a header row then numeric rows. Blank lines and lines starting
/// with '#' are skipped. Throws FormatError with the offending line number.
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::filesystem::path& path);

/// Locale-independent strict parse of a whole string as a double.
bool parse_number(const std::string& text, double& out);

}  // namespace starkmem
