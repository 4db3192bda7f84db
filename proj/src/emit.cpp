// Copyright 2026 The clab Authors
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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "clab/errors.hpp"
#include "clab/experiment.hpp"

namespace clab::cli {

using nlohmann::json;

namespace {

std::string num(double x, int digits = 17) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

std::string xml_escape(const std::string &s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += ch;
        }
    }
    return out;
}

void flatten(const json &j, const std::string &prefix, std::vector<std::pair<std::string, std::string>> &rows) {
    if (j.is_object()) {
        for (const auto &[k, v] : j.items()) {
            flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
        }
    } else if (j.is_string()) {
        rows.emplace_back(prefix, j.get<std::string>());
    } else if (j.is_number_float()) {
        rows.emplace_back(prefix, num(j.get<double>()));
    } else {
        rows.emplace_back(prefix, j.dump());
    }
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(path.string() + ": cannot open for writing");
    }
    out << text;
    out.close();
    if (!out) {
        throw std::runtime_error(path.string() + ": write failed");
    }
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    double map(double v) const {
        const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo)) : (v - lo) / (hi - lo);
        return t;
    }
};

Axis x_axis(const std::vector<double> &x) {
    Axis a;
    if (x.empty()) {
        return a;
    }
    a.lo = *std::min_element(x.begin(), x.end());
    a.hi = *std::max_element(x.begin(), x.end());
    a.log = a.lo > 0.0 && a.hi / a.lo >= 100.0;
    if (a.hi == a.lo) {
        a.lo -= 0.5;
        a.hi += 0.5;
    }
    return a;
}

Axis y_axis(const Chart &ch) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto &s : ch.series) {
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            const double e = i < s.err.size() ? s.err[i] : 0.0;
            lo = std::min(lo, s.y[i] - e);
            hi = std::max(hi, s.y[i] + e);
        }
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        return {};
    }
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad, false};
}

std::vector<double> ticks(const Axis &a) {
    std::vector<double> t;
    if (a.log) {
        for (double e = std::ceil(std::log10(a.lo)); e <= std::floor(std::log10(a.hi)); e += 1.0) {
            t.push_back(std::pow(10.0, e));
        }
        return t;
    }
    for (int i = 0; i <= 4; ++i) {
        t.push_back(a.lo + (a.hi - a.lo) * i / 4.0);
    }
    return t;
}

const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::set<OutputFormat> parse_formats(const std::string &list) {
    std::set<OutputFormat> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (tok == "json") {
            out.insert(OutputFormat::json);
        } else if (tok == "csv") {
            out.insert(OutputFormat::csv);
        } else if (tok == "svg") {
            out.insert(OutputFormat::svg);
        } else {
            throw ConfigError("$.format", "unknown format '" + tok + "' (expected json, csv, svg)");
        }
    }
    if (out.empty()) {
        throw ConfigError("$.format", "no output format given");
    }
    return out;
}

std::string chart_csv(const Chart &ch) {
    std::string out = csv_field(ch.x_label);
    for (const auto &s : ch.series) {
        out += "," + csv_field(s.label);
        if (!s.err.empty()) {
            out += "," + csv_field(s.label + " std_error");
        }
    }
    out += "\n";
    for (std::size_t i = 0; i < ch.x.size(); ++i) {
        out += num(ch.x[i]);
        for (const auto &s : ch.series) {
            out += "," + (i < s.y.size() ? num(s.y[i]) : std::string());
            if (!s.err.empty()) {
                out += "," + (i < s.err.size() ? num(s.err[i]) : std::string());
            }
        }
        out += "\n";
    }
    return out;
}

std::string chart_svg(const Chart &ch) {
    constexpr double W = 720, H = 440, L = 80, R = 190, T = 40, B = 60;
    const double pw = W - L - R;
    const double ph = H - T - B;
    const Axis ax = x_axis(ch.x);
    const Axis ay = y_axis(ch);
    auto px = [&](double x) { return L + pw * ax.map(x); };
    auto py = [&](double y) { return T + ph * (1.0 - ay.map(y)); };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
      << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
      << "<text x=\"" << L + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(ch.title)
      << "</text>\n";

    // axes
    o << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph << "\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph << "\"/>\n"
      << "</g>\n";
    o << "<g>\n";
    for (double t : ticks(ax)) {
        const double x = px(t);
        o << "<line x1=\"" << x << "\" y1=\"" << T + ph << "\" x2=\"" << x << "\" y2=\"" << T + ph + 5
          << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << x << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">" << num(t, 4) << "</text>\n";
    }
    for (double t : ticks(ay)) {
        const double y = py(t);
        o << "<line x1=\"" << L - 5 << "\" y1=\"" << y << "\" x2=\"" << L << "\" y2=\"" << y
          << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << L - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << num(t, 4) << "</text>\n";
    }
    o << "</g>\n";
    o << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
      << xml_escape(ch.x_label) << (ax.log ? " (log scale)" : "") << "</text>\n"
      << "<text x=\"20\" y=\"" << T + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << T + ph / 2
      << ")\">" << xml_escape(ch.y_label) << "</text>\n";

    // one polyline per series
    for (std::size_t k = 0; k < ch.series.size(); ++k) {
        const auto &s = ch.series[k];
        const char *color = kColors[k % std::size(kColors)];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        const std::size_t m = std::min(s.y.size(), ch.x.size());
        for (std::size_t i = 0; i < m; ++i) {
            o << (i ? " " : "") << num(px(ch.x[i]), 6) << ',' << num(py(s.y[i]), 6);
        }
        o << "\"/>\n";
        const double ly = T + 10 + 18.0 * static_cast<double>(k);
        o << "<line x1=\"" << L + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 35 << "\" y2=\"" << ly
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
          << "<text x=\"" << L + pw + 40 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::vector<std::filesystem::path> emit(const ResultRecord &record, const std::set<OutputFormat> &formats,
                                        const std::filesystem::path &out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error(out_dir.string() + ": " + ec.message());
    }
    const std::string stem = record.experiment.empty() ? "result" : record.experiment;
    std::vector<std::filesystem::path> written;

    if (formats.count(OutputFormat::json)) {
        const auto path = out_dir / (stem + ".json");
        write_file(path, record_to_json(record).dump(2) + "\n");
        written.push_back(path);
    }
    if (formats.count(OutputFormat::csv)) {
        std::vector<std::pair<std::string, std::string>> rows;
        flatten(record.outputs, "", rows);
        std::string text = "key,value\n";
        for (const auto &[k, v] : rows) {
            text += csv_field(k) + "," + csv_field(v) + "\n";
        }
        const auto path = out_dir / (stem + "_summary.csv");
        write_file(path, text);
        written.push_back(path);
        for (const auto &ch : record.charts) {
            const auto p = out_dir / (stem + "_" + ch.name + ".csv");
            write_file(p, chart_csv(ch));
            written.push_back(p);
        }
    }
    if (formats.count(OutputFormat::svg)) {
        for (const auto &ch : record.charts) {
            const auto p = out_dir / (stem + "_" + ch.name + ".svg");
            write_file(p, chart_svg(ch));
            written.push_back(p);
        }
    }
    return written;
}

}  // namespace clab::cli
