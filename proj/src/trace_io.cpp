#include "octmc/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "octmc/format.hpp"

namespace octmc {

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << fmt_fixed(r.t_s, 9) << ',' << fmt_fixed(r.stage_z_um, 4) << ',' << fmt_fixed(r.true_ilm_z_um, 4) << ','
        << fmt_fixed(r.true_rpe_z_um, 4) << ',' << fmt_fixed(r.needle_tip_z_um, 4) << ','
        << fmt_optional(r.measured_median_ilm_z_um, 4) << ',' << fmt_fixed(r.commanded_velocity_um_s, 4) << ','
        << r.event << '\n';
  }
}

std::string trace_to_csv(const Trace& trace) {
  std::ostringstream ss;
  write_trace_csv(ss, trace);
  return ss.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

double parse_number(const std::string& s, std::size_t line_no, const char* column) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
    throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad " + column + " '" + s + "'");
  }
  return v;
}

}  // namespace

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw std::runtime_error("trace line 1: unexpected header");
  Trace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 8) throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected 8 fields");
    TraceRow r;
    r.t_s = parse_number(f[0], line_no, "t_s");
    r.stage_z_um = parse_number(f[1], line_no, "stage_z_um");
    r.true_ilm_z_um = parse_number(f[2], line_no, "true_ilm_z_um");
    r.true_rpe_z_um = parse_number(f[3], line_no, "true_rpe_z_um");
    r.needle_tip_z_um = parse_number(f[4], line_no, "needle_tip_z_um");
    if (!f[5].empty()) r.measured_median_ilm_z_um = parse_number(f[5], line_no, "measured_median_ilm_z_um");
    r.commanded_velocity_um_s = parse_number(f[6], line_no, "commanded_velocity_um_s");
    r.event = f[7];
    if (!trace.rows.empty() && !(r.t_s > trace.rows.back().t_s)) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": time not increasing");
    }
    trace.rows.push_back(std::move(r));
  }
  return trace;
}

Trace read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trace_csv(in);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string());
  }
}

}  // namespace octmc
