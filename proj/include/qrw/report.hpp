#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "types.hpp"

namespace qrw {

/// One report cell: text, real value or complex value (complex serializes as
/// two CSV columns re/im and as a [re, im] JSON array).
using ReportCell = std::variant<std::string, double, cplx>;

struct Report {
    std::string kind;                           // amplitudes | moments | measure | ...
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;           // complex columns get _re/_im suffixes in CSV
    std::vector<std::vector<ReportCell>> rows;
};

namespace detail {

inline std::string fmt_double(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace detail

inline std::string to_csv(const Report& r) {
    std::ostringstream os;
    os << "# kind: " << r.kind << '\n';
    for (const auto& [k, v] : r.metadata) os << "# " << k << ": " << v << '\n';
    for (size_t i = 0; i < r.columns.size(); ++i) {
        bool is_cplx = !r.rows.empty() && std::holds_alternative<cplx>(r.rows.front()[i]);
        if (i) os << ',';
        if (is_cplx)
            os << r.columns[i] << "_re," << r.columns[i] << "_im";
        else
            os << r.columns[i];
    }
    os << '\n';
    for (const auto& row : r.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            if (const auto* s = std::get_if<std::string>(&row[i]))
                os << *s;
            else if (const auto* d = std::get_if<double>(&row[i]))
                os << detail::fmt_double(*d);
            else {
                cplx v = std::get<cplx>(row[i]);
                os << detail::fmt_double(v.real()) << ',' << detail::fmt_double(v.imag());
            }
        }
        os << '\n';
    }
    return os.str();
}

inline std::string to_json(const Report& r) {
    std::ostringstream os;
    os << "{\n  \"kind\": \"" << detail::json_escape(r.kind) << "\",\n  \"metadata\": {";
    for (size_t i = 0; i < r.metadata.size(); ++i) {
        if (i) os << ", ";
        os << '"' << detail::json_escape(r.metadata[i].first) << "\": \""
           << detail::json_escape(r.metadata[i].second) << '"';
    }
    os << "},\n  \"columns\": [";
    for (size_t i = 0; i < r.columns.size(); ++i) {
        if (i) os << ", ";
        os << '"' << detail::json_escape(r.columns[i]) << '"';
    }
    os << "],\n  \"rows\": [\n";
    for (size_t ri = 0; ri < r.rows.size(); ++ri) {
        os << "    [";
        const auto& row = r.rows[ri];
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ", ";
            if (const auto* s = std::get_if<std::string>(&row[i]))
                os << '"' << detail::json_escape(*s) << '"';
            else if (const auto* d = std::get_if<double>(&row[i]))
                os << detail::fmt_double(*d);
            else {
                cplx v = std::get<cplx>(row[i]);
                os << '[' << detail::fmt_double(v.real()) << ", " << detail::fmt_double(v.imag())
                   << ']';
            }
        }
        os << (ri + 1 < r.rows.size() ? "],\n" : "]\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

/// Minimal SVG polyline plot (weight curves, probability profiles).
inline std::string to_svg_curve(const std::vector<double>& xs, const std::vector<double>& ys,
                                const std::string& title) {
    const int w = 720, h = 420, m = 50;
    double xmin = xs.front(), xmax = xs.back();
    double ymin = 0.0, ymax = 1e-12;
    for (double y : ys) ymax = std::max(ymax, y);
    ymax *= 1.05;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << title << "</text>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\"" << h - m
       << "\" stroke=\"black\"/>\n<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m
       << "\" y2=\"" << h - m << "\" stroke=\"black\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
        double px = m + (xs[i] - xmin) / (xmax - xmin) * (w - 2 * m);
        double py = h - m - (ys[i] - ymin) / (ymax - ymin) * (h - 2 * m);
        os << detail::fmt_double(px) << ',' << detail::fmt_double(py) << ' ';
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

}  // namespace qrw
