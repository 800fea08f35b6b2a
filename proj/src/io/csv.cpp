#include "dqgp/io/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "dqgp/errors.hpp"

namespace dqgp::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw ConfigError("column '" + name + "' is absent from " + schema + " table");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(parse_double(r[static_cast<std::size_t>(c)]));
  return out;
}

std::string to_csv(const CsvTable& t) {
  std::ostringstream os;
  os << "# dqgp " << t.schema << " v" << t.version << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

CsvTable parse_csv(const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  std::string line;
  CsvTable t;
  if (!std::getline(is, line) || line.rfind("# dqgp ", 0) != 0) {
    throw ConfigError(origin + ": missing '# dqgp <schema> v<version>' header");
  }
  {
    std::istringstream hs(line.substr(7));
    std::string ver;
    hs >> t.schema >> ver;
    const bool digits = ver.size() >= 2 && ver.find_first_not_of("0123456789", 1) == std::string::npos;
    if (t.schema.empty() || ver[0] != 'v' || !digits) throw ConfigError(origin + ": malformed schema line");
    t.version = std::stoi(ver.substr(1));
  }
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(is, line)) throw ConfigError(origin + ": missing column header");
  t.columns = split(line);
  std::size_t lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.columns.size()) {
      throw ConfigError(origin + ": line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_csv(const std::string& path, const CsvTable& t) { write_file_atomic(path, to_csv(t)); }

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path), path); }

}  // namespace dqgp::io
