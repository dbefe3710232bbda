#include "abwave/tools/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "abwave/tools/errors.hpp"

namespace abwave::tools {

std::string format_csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Table::add_numeric(std::string header, std::vector<double> values) {
  if (!columns_.empty() && values.size() != rows()) {
    throw std::invalid_argument("Table: column '" + header + "' has the wrong length");
  }
  columns_.push_back(Column{std::move(header), false, std::move(values), {}});
}

void Table::add_text(std::string header, std::vector<std::string> values) {
  if (!columns_.empty() && values.size() != rows()) {
    throw std::invalid_argument("Table: column '" + header + "' has the wrong length");
  }
  columns_.push_back(Column{std::move(header), true, {}, std::move(values)});
}

std::size_t Table::rows() const {
  if (columns_.empty()) return 0;
  const auto& c = columns_.front();
  return c.is_text ? c.text.size() : c.numbers.size();
}

std::size_t Table::index_of(const std::string& header) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& h = columns_[i].header;
    if (h == header) return i;
    if (h.size() > header.size() && h.compare(0, header.size(), header) == 0 &&
        h[header.size()] == '(') {
      return i;
    }
  }
  throw std::out_of_range("Table: no column '" + header + "'");
}

const Table::Column& Table::column(const std::string& header) const {
  return columns_[index_of(header)];
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool row_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      row_started = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      row_started = true;
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      row_started = false;
    } else if (c != '\r') {
      cell += c;
      row_started = true;
    }
  }
  if (row_started) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

bool parse_number(const std::string& s, double& out) {
  if (s == "nan") {
    out = std::nan("");
    return true;
  }
  if (s == "inf" || s == "-inf") {
    out = s[0] == '-' ? -HUGE_VAL : HUGE_VAL;
    return true;
  }
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    out << (i ? "," : "") << quote(columns_[i].header);
  }
  out << '\n';
  const std::size_t n = rows();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      const auto& c = columns_[i];
      out << (i ? "," : "") << (c.is_text ? quote(c.text[r]) : format_csv_number(c.numbers[r]));
    }
    out << '\n';
  }
  return out.str();
}

Table Table::from_csv(const std::string& text) {
  const auto rows = split_csv(text);
  if (rows.empty()) throw std::invalid_argument("CSV: empty input");
  const auto& header = rows.front();
  Table t;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::vector<double> numbers;
    std::vector<std::string> text_cells;
    bool numeric = true;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != header.size()) {
        throw std::invalid_argument("CSV: row " + std::to_string(r + 1) + " has " +
                                    std::to_string(rows[r].size()) + " cells, expected " +
                                    std::to_string(header.size()));
      }
      text_cells.push_back(rows[r][c]);
      double v = 0.0;
      if (numeric && parse_number(rows[r][c], v)) {
        numbers.push_back(v);
      } else {
        numeric = false;
      }
    }
    if (numeric) {
      t.add_numeric(header[c], std::move(numbers));
    } else {
      t.add_text(header[c], std::move(text_cells));
    }
  }
  return t;
}

namespace {

// Tick positions at 1, 2 or 5 times a power of ten.
std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return ticks;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};

}  // namespace

std::string render_svg(const Table& table, const PlotSpec& spec) {
  const auto& xc = table.column(spec.x_column);
  if (xc.is_text) throw std::invalid_argument("render_svg: x column is not numeric");
  std::vector<const Table::Column*> ys;
  for (const auto& name : spec.y_columns) {
    const auto& c = table.column(name);
    if (c.is_text) throw std::invalid_argument("render_svg: column '" + name + "' is not numeric");
    ys.push_back(&c);
  }
  const Table::Column* mask = spec.mask_column.empty() ? nullptr : &table.column(spec.mask_column);
  const std::size_t n = table.rows();
  auto usable = [&](std::size_t r) {
    if (mask != nullptr && mask->numbers[r] != 0.0) return false;
    return std::isfinite(xc.numbers[r]);
  };

  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  for (std::size_t r = 0; r < n; ++r) {
    if (!usable(r)) continue;
    for (const auto* c : ys) {
      const double y = c->numbers[r];
      if (!std::isfinite(y)) continue;
      xmin = std::min(xmin, xc.numbers[r]);
      xmax = std::max(xmax, xc.numbers[r]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin < xmax)) {
    xmin = std::isfinite(xmin) ? xmin - 1.0 : 0.0;
    xmax = xmin + 2.0;
  }
  if (!(ymin < ymax)) {
    ymin = std::isfinite(ymin) ? ymin - 1.0 : 0.0;
    ymax = ymin + 2.0;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double W = 800, H = 500, left = 90, right = 30, top = 50, bottom = 70;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<desc>Drawn from " << escape_xml(spec.source_csv) << "</desc>\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
    << escape_xml(spec.title) << "</text>\n";
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : nice_ticks(xmin, xmax)) {
    const std::string X = fmt(px(t));
    s << "<line x1=\"" << X << "\" y1=\"" << top + ph << "\" x2=\"" << X << "\" y2=\""
      << top + ph + 5 << "\" stroke=\"black\"/>";
    s << "<text x=\"" << X << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\">" << fmt(t)
      << "</text>\n";
  }
  for (double t : nice_ticks(ymin, ymax)) {
    const std::string Y = fmt(py(t));
    s << "<line x1=\"" << left - 5 << "\" y1=\"" << Y << "\" x2=\"" << left << "\" y2=\"" << Y
      << "\" stroke=\"black\"/>";
    s << "<text x=\"" << left - 8 << "\" y=\"" << Y << "\" text-anchor=\"end\" dy=\"4\">" << fmt(t)
      << "</text>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 20 << "\" text-anchor=\"middle\">"
    << escape_xml(xc.header) << "</text>\n";
  if (ys.size() == 1) {
    s << "<text transform=\"translate(20," << top + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(ys.front()->header)
      << "</text>\n";
  }

  for (std::size_t k = 0; k < ys.size(); ++k) {
    const char* colour = kColours[k % std::size(kColours)];
    // A skipped row breaks the line, so each run becomes its own polyline.
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\""
          << points << "\"/>\n";
        points.clear();
      }
    };
    for (std::size_t r = 0; r < n; ++r) {
      const double y = ys[k]->numbers[r];
      if (!usable(r) || !std::isfinite(y)) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fmt(px(xc.numbers[r])) + "," + fmt(py(y));
    }
    flush();
    const double ly = top + 16 + 18.0 * static_cast<double>(k);
    s << "<line x1=\"" << left + pw - 190 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw - 165
      << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>";
    s << "<text x=\"" << left + pw - 160 << "\" y=\"" << ly << "\">"
      << escape_xml(ys[k]->header) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path);
  out << content;
  out.close();
  if (!out) throw IoError("write failed", path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace abwave::tools
