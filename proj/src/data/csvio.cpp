#include <fstream>
#include <stdexcept>
#include <string>

#include "qiren/data/dataset.hpp"

namespace qiren {

std::vector<double> csv_read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(line.substr(a), &used);
    } catch (...) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": not a number: " + line);
    }
    const size_t rest = line.find_first_not_of(" \t\r", a + used);
    if (rest != std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": trailing characters: " + line);
    out.push_back(v);
  }
  return out;
}

void csv_write_column(const std::string& path,
                      const std::vector<double>& values) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  for (double v : values) out << v << '\n';
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace qiren
