#include "figures.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "error.hpp"
#include "format.hpp"

namespace reviewbounds {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
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

// Maps item index and value onto the plot area.
struct Axes {
  std::size_t n_items;
  double y_min;
  double y_max;

  double x(std::size_t i) const {
    const double span = kWidth - kLeft - kRight;
    return n_items == 1 ? kLeft + span / 2.0
                        : kLeft + span * static_cast<double>(i) / static_cast<double>(n_items - 1);
  }
  double y(double v) const {
    return kTop + (kHeight - kTop - kBottom) * (y_max - v) / (y_max - y_min);
  }
};

void svg_open(std::ostream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << escape_xml(title) << "</text>\n";
}

void svg_axes(std::ostream& out, const Axes& ax, const std::vector<std::string>& labels,
              const std::string& y_label) {
  const double x0 = kLeft;
  const double x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom;
  out << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << num(x0) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x0) << "\" y2=\""
      << num(y0) << "\"/>\n"
      << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1) << "\" y2=\""
      << num(y0) << "\"/>\n"
      << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = ax.y_min + (ax.y_max - ax.y_min) * k / 4.0;
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(ax.y(v) + 3)
        << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  // Thin out tick labels on wide charts.
  const std::size_t stride = std::max<std::size_t>(1, (labels.size() + 24) / 25);
  for (std::size_t i = 0; i < labels.size(); i += stride) {
    out << "<text x=\"" << num(ax.x(i)) << "\" y=\"" << num(y0 + 14)
        << "\" text-anchor=\"middle\">" << escape_xml(labels[i]) << "</text>\n";
  }
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kHeight - 18)
      << "\" text-anchor=\"middle\" font-size=\"12\">Item</text>\n"
      << "<text x=\"16\" y=\"" << num(kHeight / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << num(kHeight / 2) << ")\">" << escape_xml(y_label)
      << "</text>\n"
      << "</g>\n";
}

std::string polyline(const Axes& ax, const std::vector<double>& values) {
  std::string pts;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) pts += ' ';
    pts += num(ax.x(i)) + "," + num(ax.y(values[i]));
  }
  return pts;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << body;
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

std::string figure1_svg(const Report& report) {
  std::vector<std::string> labels;
  std::vector<double> wr, rw;
  double top = 0.0;
  for (const auto& e : report.per_item) {
    labels.push_back(e.item_id);
    wr.push_back(e.proportions.p_wr);
    rw.push_back(e.proportions.p_rw);
    top = std::max({top, e.proportions.p_wr, e.proportions.p_rw});
  }
  const Axes ax{labels.size(), 0.0, top > 0.0 ? top * 1.1 : 1.0};
  std::ostringstream out;
  svg_open(out, "Proportions of WR (solid) and RW (dashed) by item");
  svg_axes(out, ax, labels, "Proportion");
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\""
      << polyline(ax, wr) << "\"/>\n"
      << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\" "
         "points=\""
      << polyline(ax, rw) << "\"/>\n";
  for (std::size_t i = 0; i < wr.size(); ++i) {
    out << "<circle cx=\"" << num(ax.x(i)) << "\" cy=\"" << num(ax.y(wr[i])) << "\" r=\"2\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string figure2_svg(const Report& report) {
  std::vector<std::string> labels;
  double lo = 0.0, hi = 0.0;
  for (const auto& e : report.per_item) {
    labels.push_back(e.item_id);
    lo = std::min(lo, e.ate_free.lower);
    hi = std::max(hi, e.ate_free.upper);
  }
  const double pad = std::max(0.05, (hi - lo) * 0.05);
  const Axes ax{labels.size(), lo - pad, hi + pad};
  std::ostringstream out;
  svg_open(out, "Assumption-free bounds on the ATE of answer reviewing");
  svg_axes(out, ax, labels, "ATE");
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(ax.y(0.0)) << "\" x2=\""
      << num(kWidth - kRight) << "\" y2=\"" << num(ax.y(0.0))
      << "\" stroke=\"gray\" stroke-dasharray=\"3 3\"/>\n";
  out << "<g stroke=\"black\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 0; i < report.per_item.size(); ++i) {
    const auto& b = report.per_item[i].ate_free;
    const double x = ax.x(i);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(ax.y(b.lower)) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(ax.y(b.upper)) << "\"/>\n"
        << "<line x1=\"" << num(x - 3) << "\" y1=\"" << num(ax.y(b.lower)) << "\" x2=\""
        << num(x + 3) << "\" y2=\"" << num(ax.y(b.lower)) << "\"/>\n"
        << "<line x1=\"" << num(x - 3) << "\" y1=\"" << num(ax.y(b.upper)) << "\" x2=\""
        << num(x + 3) << "\" y2=\"" << num(ax.y(b.upper)) << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace

std::vector<std::filesystem::path> emitFigures(const Report& report,
                                               const std::filesystem::path& out_dir) {
  if (report.per_item.empty()) {
    throw Error(ErrorKind::Usage, "report has no analyzed items to plot");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorKind::Io, "cannot create directory '" + out_dir.string() + "': " + ec.message());
  }

  std::string fig1 = "item_id,p_wr,p_rw\n";
  std::string fig2 = "item_id,ate_lower_free,ate_upper_free\n";
  for (const auto& e : report.per_item) {
    fig1 += e.item_id + "," + format_real(e.proportions.p_wr) + "," + format_real(e.proportions.p_rw) + "\n";
    fig2 += e.item_id + "," + format_real(e.ate_free.lower) + "," + format_real(e.ate_free.upper) + "\n";
  }
  std::vector<std::filesystem::path> written = {out_dir / "figure1.csv", out_dir / "figure2.csv",
                                                out_dir / "figure1.svg", out_dir / "figure2.svg"};
  write_file(written[0], fig1);
  write_file(written[1], fig2);
  write_file(written[2], figure1_svg(report));
  write_file(written[3], figure2_svg(report));
  return written;
}

}  // namespace reviewbounds
