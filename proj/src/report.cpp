#include "fss/report.hpp"

#include <algorithm>
#include <sstream>

namespace fss {

void Report::put(const std::string& key, const std::string& value) {
  kv.push_back({key, value});
}

void Report::put(const std::string& key, long value) {
  kv.push_back({key, std::to_string(value)});
}

void Report::verdict(const std::string& name, bool pass, const std::string& detail) {
  verdicts.push_back(Verdict{name, pass, detail});
}

bool Report::ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.pass; });
}

std::string Report::render_human() const {
  std::ostringstream os;
  os << "== " << command << " ==\n";
  for (const auto& [k, v] : kv) os << k << ": " << v << "\n";
  for (const auto& g : grids) {
    os << "\n" << g.title << "\n";
    std::vector<size_t> widths(g.col_labels.size() + 1, 0);
    for (const auto& rl : g.row_labels) widths[0] = std::max(widths[0], rl.size());
    for (size_t c = 0; c < g.col_labels.size(); ++c) {
      widths[c + 1] = g.col_labels[c].size();
      for (const auto& row : g.cells)
        if (c < row.size()) widths[c + 1] = std::max(widths[c + 1], row[c].size());
    }
    auto pad = [](const std::string& s, size_t w) {
      return s + std::string(w >= s.size() ? w - s.size() : 0, ' ');
    };
    os << "  " << pad("", widths[0]);
    for (size_t c = 0; c < g.col_labels.size(); ++c)
      os << "  " << pad(g.col_labels[c], widths[c + 1]);
    os << "\n";
    for (size_t r = 0; r < g.cells.size(); ++r) {
      os << "  " << pad(r < g.row_labels.size() ? g.row_labels[r] : "", widths[0]);
      for (size_t c = 0; c < g.cells[r].size(); ++c)
        os << "  " << pad(g.cells[r][c], widths[c + 1]);
      os << "\n";
    }
  }
  if (!verdicts.empty()) {
    os << "\n";
    for (const auto& v : verdicts) {
      os << (v.pass ? "PASS" : "FAIL") << "  " << v.name;
      if (!v.detail.empty()) os << "  (" << v.detail << ")";
      os << "\n";
    }
    os << (ok() ? "all checks passed" : "SOME CHECKS FAILED") << "\n";
  }
  return os.str();
}

std::string Report::render_machine() const {
  std::ostringstream os;
  os << "command=" << command << "\n";
  for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
  for (const auto& g : grids) {
    for (size_t r = 0; r < g.cells.size(); ++r)
      for (size_t c = 0; c < g.cells[r].size(); ++c)
        os << g.key << "[" << g.row_labels[r] << "][" << g.col_labels[c]
           << "]=" << g.cells[r][c] << "\n";
  }
  for (const auto& v : verdicts)
    os << "verdict." << v.name << "=" << (v.pass ? "pass" : "fail") << "\n";
  os << "ok=" << (ok() ? "1" : "0") << "\n";
  return os.str();
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& [k, v] : other.kv) kv.push_back({prefix + k, v});
  for (const auto& g : other.grids) {
    Grid g2 = g;
    g2.key = prefix + g.key;
    grids.push_back(std::move(g2));
  }
  for (const auto& v : other.verdicts)
    verdicts.push_back(Verdict{prefix + v.name, v.pass, v.detail});
}

}  // namespace fss
