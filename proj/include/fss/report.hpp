#pragma once

#include <string>
#include <vector>

namespace fss {

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Grid of values with row/column labels, rendered as an aligned table in
// human mode and as indexed key=value lines in machine mode.
struct Grid {
  std::string title, key;
  std::vector<std::string> row_labels, col_labels;
  std::vector<std::vector<std::string>> cells;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> kv;
  std::vector<Grid> grids;
  std::vector<Verdict> verdicts;

  void put(const std::string& key, const std::string& value);
  void put(const std::string& key, long value);
  void verdict(const std::string& name, bool pass, const std::string& detail = "");
  bool ok() const;

  std::string render_human() const;
  // Line-oriented key=value stream; byte-deterministic for fixed inputs.
  std::string render_machine() const;

  void merge(const Report& other, const std::string& prefix);
};

}  // namespace fss
