#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "anv/common.hpp"

namespace anv {

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat key=value configuration with deterministic ordering.
struct Config {
  std::map<std::string, std::string> kv;

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
  }

  static Config parse_text(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("config: expected key=value, got: " + line);
      c.kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return c;
  }

  bool has(const std::string& k) const { return kv.count(k) > 0; }
  std::string get(const std::string& k, const std::string& dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  }
  double get_double(const std::string& k, double dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config: bad numeric value for " + k + ": " + it->second);
    }
  }
  long get_long(const std::string& k, long dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    try {
      return std::stol(it->second);
    } catch (const std::exception&) {
      throw ConfigError("config: bad integer value for " + k + ": " + it->second);
    }
  }
  std::uint64_t get_u64(const std::string& k, std::uint64_t dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    try {
      return std::stoull(it->second);
    } catch (const std::exception&) {
      throw ConfigError("config: bad seed value for " + k + ": " + it->second);
    }
  }
  std::vector<double> get_list(const std::string& k, const std::vector<double>& dflt) const {
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    std::vector<double> out;
    std::istringstream in(it->second);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.empty()) continue;
      out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ConfigError("config: empty list for " + k);
    return out;
  }

  /// FNV-1a over the canonical "key=value\n" lines (map order is sorted).
  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto eat = [&](const std::string& s) {
      for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
      }
    };
    for (const auto& [k, v] : kv) {
      eat(k);
      eat("=");
      eat(v);
      eat("\n");
    }
    return h;
  }
};

/// Deterministic number formatting for report bodies.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// RFC-4180 CSV writer: CRLF line endings, mandatory header, '.' decimals.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) body_ += ',';
      body_ += escape(cells[i]);
    }
    body_ += "\r\n";
  }
  void row_values(const std::vector<double>& vals) {
    std::vector<std::string> cells;
    cells.reserve(vals.size());
    for (double v : vals) cells.push_back(fmt_double(v));
    row(cells);
  }
  const std::string& body() const { return body_; }

 private:
  static std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      out += c;
      if (c == '"') out += '"';
    }
    out += '"';
    return out;
  }
  std::string body_;
};

/// Minimal static SVG polyline plot of one or more series.
inline std::string svg_plot(const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
                            const std::string& x_label, const std::string& y_label) {
  const int W = 640, H = 420, M = 56;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [name, pts] : series)
    for (auto [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  auto px = [&](double x) { return M + (W - 2 * M) * (x - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return H - M - (H - 2 * M) * (y - ymin) / (ymax - ymin); };
  static const char* colors[] = {"#1f6fb2", "#c23b22", "#2e8540", "#8031a7"};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
    << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" font-size=\"13\" text-anchor=\"middle\">"
    << x_label << "</text>\n";
  s << "<text x=\"14\" y=\"" << H / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << H / 2 << ")\">" << y_label << "</text>\n";
  int ci = 0;
  for (const auto& [name, pts] : series) {
    s << "<polyline fill=\"none\" stroke=\"" << colors[ci % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : pts) s << px(x) << ',' << py(y) << ' ';
    s << "\"/>\n";
    s << "<text x=\"" << W - M - 4 << "\" y=\"" << M + 16 * (ci + 1)
      << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << colors[ci % 4] << "\">" << name
      << "</text>\n";
    ++ci;
  }
  s << "</svg>\n";
  return s.str();
}

struct Failure {
  std::string name;
  std::string detail;
};

/// A finished experiment: header lines (metadata, may carry a timestamp) and
/// a deterministic body. Re-running with the same config and seed must
/// reproduce the body byte for byte.
struct Report {
  std::vector<std::string> header;
  std::string body;
  std::vector<Failure> failures;
  int exit_code = 0;

  std::string full_text() const {
    std::string out;
    for (const auto& h : header) out += "# " + h + "\n";
    out += body;
    return out;
  }
  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("report: cannot write " + path);
    f << full_text();
  }
  /// Machine-readable failure record (stable key order).
  std::string failure_record(const std::string& command) const {
    std::ostringstream s;
    s << "{\"command\":\"" << command << "\",\"failures\":[";
    for (std::size_t i = 0; i < failures.size(); ++i) {
      if (i) s << ',';
      s << "{\"detail\":\"" << failures[i].detail << "\",\"name\":\"" << failures[i].name
        << "\"}";
    }
    s << "]}";
    return s.str();
  }
};

}  // namespace anv
