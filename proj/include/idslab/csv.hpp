#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace idslab {

/// A header plus string cells, exactly as read from disk.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> cells;

  std::size_t row_count() const noexcept { return cells.size(); }
  std::size_t column_count() const noexcept { return header.size(); }

  /// Position of `name` in the header, or npos.
  std::size_t find_column(std::string_view name) const noexcept;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Parses delimited text. Fields are bare; quoting is not supported and a
/// quote character is rejected. Row numbers in errors are 1-based data rows
/// (the header is row 0).
RawTable parse_csv(std::string_view text, char delimiter = ',');

RawTable load_csv(const std::filesystem::path& path, char delimiter = ',');

std::string format_csv(const RawTable& table, char delimiter = ',');
void save_csv(const RawTable& table, const std::filesystem::path& path, char delimiter = ',');

}  // namespace idslab
