#include "octmc/plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "octmc/format.hpp"
#include "octmc/trace_io.hpp"

namespace octmc {

namespace {

constexpr const char* kNeedleColor = "#1f77b4";
constexpr const char* kStageColor = "#ff7f0e";

// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_trace_svg(const Trace& trace, const PlotOptions& opt) {
  if (trace.rows.empty()) throw std::invalid_argument("render_trace_svg: empty trace");
  const auto& rows = trace.rows;
  const double n0 = rows.front().needle_tip_z_um;
  const double s0 = rows.front().stage_z_um;

  double t_min = rows.front().t_s;
  double t_max = rows.back().t_s;
  if (t_max <= t_min) t_max = t_min + 1.0;
  double z_min = 0.0;
  double z_max = 0.0;
  for (const auto& r : rows) {
    z_min = std::min({z_min, r.needle_tip_z_um - n0, r.stage_z_um - s0});
    z_max = std::max({z_max, r.needle_tip_z_um - n0, r.stage_z_um - s0});
  }
  if (z_max - z_min < 1.0) {
    z_min -= 1.0;
    z_max += 1.0;
  }
  const double z_step = nice_step(z_max - z_min, 6);
  z_min = std::floor(z_min / z_step) * z_step;
  z_max = std::ceil(z_max / z_step) * z_step;
  const double t_step = nice_step(t_max - t_min, 8);

  const double left = 70.0;
  const double right = 20.0;
  const double top = opt.title.empty() ? 20.0 : 40.0;
  const double bottom = 50.0;
  const double pw = opt.width_px - left - right;
  const double ph = opt.height_px - top - bottom;
  auto px = [&](double t) { return left + (t - t_min) / (t_max - t_min) * pw; };
  auto py = [&](double z) { return top + (z_max - z) / (z_max - z_min) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width_px << "\" height=\"" << opt.height_px
    << "\" viewBox=\"0 0 " << opt.width_px << ' ' << opt.height_px << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    o << "<text x=\"" << fmt_fixed(left + pw / 2, 1) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(opt.title) << "</text>\n";
  }

  o << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double z = z_min; z <= z_max + 1e-9 * z_step; z += z_step) {
    o << "<line x1=\"" << fmt_fixed(left, 2) << "\" y1=\"" << fmt_fixed(py(z), 2) << "\" x2=\"" << fmt_fixed(left + pw, 2)
      << "\" y2=\"" << fmt_fixed(py(z), 2) << "\"/>\n";
  }
  o << "</g>\n";
  o << "<g text-anchor=\"end\">\n";
  for (double z = z_min; z <= z_max + 1e-9 * z_step; z += z_step) {
    o << "<text x=\"" << fmt_fixed(left - 6, 2) << "\" y=\"" << fmt_fixed(py(z) + 4, 2) << "\">" << fmt_fixed(z, 0)
      << "</text>\n";
  }
  o << "</g>\n<g text-anchor=\"middle\">\n";
  for (double t = std::ceil(t_min / t_step) * t_step; t <= t_max + 1e-9 * t_step; t += t_step) {
    o << "<text x=\"" << fmt_fixed(px(t), 2) << "\" y=\"" << fmt_fixed(top + ph + 18, 2) << "\">"
      << fmt_fixed(t, t_step < 1.0 ? 1 : 0) << "</text>\n";
  }
  o << "</g>\n";
  o << "<rect x=\"" << fmt_fixed(left, 2) << "\" y=\"" << fmt_fixed(top, 2) << "\" width=\"" << fmt_fixed(pw, 2)
    << "\" height=\"" << fmt_fixed(ph, 2) << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << fmt_fixed(left + pw / 2, 2) << "\" y=\"" << opt.height_px - 10
    << "\" text-anchor=\"middle\">time (s)</text>\n";
  o << "<text transform=\"translate(18," << fmt_fixed(top + ph / 2, 2)
    << ") rotate(-90)\" text-anchor=\"middle\">Z position (\xC2\xB5m)</text>\n";

  for (const auto& r : rows) {
    const bool insert = r.has_event(kEventInsertDone);
    const bool inject = r.has_event(kEventInjectStart) || r.has_event(kEventInjectEnd);
    if (!insert && !inject) continue;
    o << "<line x1=\"" << fmt_fixed(px(r.t_s), 2) << "\" y1=\"" << fmt_fixed(top, 2) << "\" x2=\""
      << fmt_fixed(px(r.t_s), 2) << "\" y2=\"" << fmt_fixed(top + ph, 2) << "\" stroke=\""
      << (insert ? "#2ca02c" : "#7f7f7f") << "\" stroke-dasharray=\"5,4\"><title>" << escape(r.event)
      << "</title></line>\n";
  }

  auto polyline = [&](const char* color, auto value) {
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& r : rows) {
      if (!first) o << ' ';
      first = false;
      o << fmt_fixed(px(r.t_s), 2) << ',' << fmt_fixed(py(value(r)), 2);
    }
    o << "\"/>\n";
  };
  polyline(kStageColor, [&](const TraceRow& r) { return r.stage_z_um - s0; });
  polyline(kNeedleColor, [&](const TraceRow& r) { return r.needle_tip_z_um - n0; });

  const double lx = left + 12;
  const double ly = top + 14;
  o << "<line x1=\"" << fmt_fixed(lx, 2) << "\" y1=\"" << fmt_fixed(ly, 2) << "\" x2=\"" << fmt_fixed(lx + 24, 2)
    << "\" y2=\"" << fmt_fixed(ly, 2) << "\" stroke=\"" << kNeedleColor << "\" stroke-width=\"2\"/>\n";
  o << "<text x=\"" << fmt_fixed(lx + 30, 2) << "\" y=\"" << fmt_fixed(ly + 4, 2) << "\">needle tip</text>\n";
  o << "<line x1=\"" << fmt_fixed(lx, 2) << "\" y1=\"" << fmt_fixed(ly + 16, 2) << "\" x2=\"" << fmt_fixed(lx + 24, 2)
    << "\" y2=\"" << fmt_fixed(ly + 16, 2) << "\" stroke=\"" << kStageColor << "\" stroke-width=\"2\"/>\n";
  o << "<text x=\"" << fmt_fixed(lx + 30, 2) << "\" y=\"" << fmt_fixed(ly + 20, 2) << "\">stage</text>\n";
  o << "</svg>\n";
  return o.str();
}

void write_trace_svg(const std::filesystem::path& path, const Trace& trace, const PlotOptions& options) {
  write_file_atomic(path, render_trace_svg(trace, options));
}

}  // namespace octmc
