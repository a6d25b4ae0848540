// Copyright 2026 The maxineq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maxineq/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace maxineq {
namespace {

void write_value(const nlohmann::json& v, int depth, std::string& out) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close(2 * static_cast<std::size_t>(depth), ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      // nlohmann::json stores objects in a std::map, so iteration is sorted.
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        write_value(it.value(), depth + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad;
        write_value(v[i], depth + 1, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d))
        out += format_double(d);
      else
        out += "\"" + format_double(d) + "\"";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string canonical_json(const nlohmann::json& value) {
  std::string out;
  write_value(value, 0, out);
  out += "\n";
  return out;
}

std::string csv_quote(std::string_view field) {
  const bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) +
                                " cells, header has " + std::to_string(header_.size()));
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_quote(cells[i]);
    }
    out += "\r\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                             ec.message());
  }
}

std::string envelope_svg(const RatioEnvelope& e, std::string_view title) {
  constexpr double kW = 640, kH = 400, kL = 70, kR = 20, kT = 40, kB = 50;
  std::ostringstream s;
  s.precision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::string escaped;
  for (char c : title) {
    if (c == '<')
      escaped += "&lt;";
    else if (c == '>')
      escaped += "&gt;";
    else if (c == '&')
      escaped += "&amp;";
    else
      escaped += c;
  }
  s << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"14\">" << escaped << "</text>\n";

  std::vector<const EnvelopePoint*> pts;
  for (const auto& p : e.points) {
    if (p.time > 0 && p.lower > 0 && std::isfinite(p.upper)) pts.push_back(&p);
  }
  if (pts.empty()) {
    s << "</svg>\n";
    return s.str();
  }
  double x0 = std::log10(pts.front()->time), x1 = std::log10(pts.back()->time);
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto* p : pts) {
    y0 = std::min(y0, std::log10(p->lower));
    y1 = std::max(y1, std::log10(p->upper));
  }
  if (x1 - x0 < 1e-12) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 - y0 < 0.1) {
    const double mid = 0.5 * (y0 + y1);
    y0 = mid - 0.05;
    y1 = mid + 0.05;
  }
  auto px = [&](double t) { return kL + (std::log10(t) - x0) / (x1 - x0) * (kW - kL - kR); };
  auto py = [&](double r) { return kH - kB - (std::log10(r) - y0) / (y1 - y0) * (kH - kT - kB); };

  s << "<g stroke=\"black\" fill=\"none\"><line x1=\"" << kL << "\" y1=\"" << kH - kB
    << "\" x2=\"" << kW - kR << "\" y2=\"" << kH - kB << "\"/><line x1=\"" << kL << "\" y1=\""
    << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB << "\"/></g>\n";
  for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d) {
    const double x = px(std::pow(10.0, d));
    s << "<text x=\"" << x << "\" y=\"" << kH - kB + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
      << "</text>\n";
  }
  s << "<text x=\"" << kL - 8 << "\" y=\"" << py(std::pow(10.0, y1)) + 4
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
    << std::pow(10.0, y1) << "</text>\n";
  s << "<text x=\"" << kL - 8 << "\" y=\"" << py(std::pow(10.0, y0)) + 4
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
    << std::pow(10.0, y0) << "</text>\n";
  s << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">t</text>\n";

  s << "<polygon fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"none\" points=\"";
  for (const auto* p : pts) s << px(p->time) << ',' << py(p->upper) << ' ';
  for (auto it = pts.rbegin(); it != pts.rend(); ++it)
    s << px((*it)->time) << ',' << py((*it)->lower) << ' ';
  s << "\"/>\n<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\" points=\"";
  for (const auto* p : pts) s << px(p->time) << ',' << py(p->ratio) << ' ';
  s << "\"/>\n</svg>\n";
  return s.str();
}

}  // namespace maxineq
