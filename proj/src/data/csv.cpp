#include "idslab/csv.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "idslab/error.hpp"

namespace idslab {

namespace {

std::vector<std::string> split_line(std::string_view line, char delimiter, std::size_t row) {
  if (line.find('"') != std::string_view::npos) {
    fail(ErrorKind::Parse, "row " + std::to_string(row) +
                               ": quoted fields are not supported (embedded delimiter?)");
  }
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::size_t RawTable::find_column(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return npos;
}

RawTable parse_csv(std::string_view text, char delimiter) {
  // Strip a UTF-8 byte order mark.
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  // Trailing blank lines are tolerated; interior ones are ragged rows.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) fail(ErrorKind::Schema, "empty file: no header row");

  RawTable table;
  table.header = split_line(lines.front(), delimiter, 0);
  std::unordered_set<std::string> seen;
  for (const auto& name : table.header) {
    if (!seen.insert(name).second) fail(ErrorKind::Schema, "duplicate column name '" + name + "'");
  }

  table.cells.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto row = split_line(lines[i], delimiter, i);
    if (row.size() != table.header.size()) {
      fail(ErrorKind::Parse, "row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                                 " cells, header has " + std::to_string(table.header.size()));
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

RawTable load_csv(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_csv(buffer.str(), delimiter);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string format_csv(const RawTable& table, char delimiter) {
  std::string out;
  auto append_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(delimiter);
      out += row[i];
    }
    out.push_back('\n');
  };
  append_row(table.header);
  for (const auto& row : table.cells) append_row(row);
  return out;
}

void save_csv(const RawTable& table, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << format_csv(table, delimiter);
}

}  // namespace idslab
