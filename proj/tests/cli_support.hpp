#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qcext/cli.hpp"

namespace clitest {

struct Result {
  int code;
  std::string out;
  std::string err;
};

inline Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qcext");
  std::ostringstream out, err;
  const int code = qcext::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// A file that is removed again when the test scope ends.
class TempFile {
 public:
  TempFile(std::string name, const std::string& contents = {}) : path_(std::move(name)) {
    if (!contents.empty()) std::ofstream(path_) << contents;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }
  std::string read() const {
    std::ifstream in(path_);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

 private:
  std::string path_;
};

inline std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t end = std::min(line.find(',', start), line.size());
      double v = 0.0;
      std::from_chars(line.data() + start, line.data() + end, v);
      row.push_back(v);
      start = end + 1;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace clitest
