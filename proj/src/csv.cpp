#include "vh/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "vh/error.hpp"

namespace vh {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::usage, "cannot write " + path);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) f.push_back(cur);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  return f;
}

double parse_field(const std::string& s, const std::string& path, std::size_t line) {
  std::size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return std::nan("");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data() + a, s.data() + b + 1, v);
  if (ec != std::errc() || ptr != s.data() + b + 1)
    throw Error(Errc::parse, path + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_profile_csv(const std::string& path, const Profile& p) {
  auto out = open_out(path);
  out << "x,rho,theta,circ_var\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    out << format_number(p.bin_centers[i]) << ',' << format_number(p.rho[i]) << ',' << format_number(p.theta_mean[i])
        << ',' << format_number(p.circ_var[i]) << '\n';
}

void write_grid_csv(const std::string& path, const MacroGrid& g) {
  auto out = open_out(path);
  out << "x,rho,theta\n";
  for (std::size_t i = 0; i < g.nx(); ++i)
    out << format_number(g.center(i)) << ',' << format_number(g.cells[i].rho) << ','
        << format_number(g.cells[i].theta) << '\n';
}

Profile read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse, path + ": empty file");
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "x" || header[1] != "rho" || header[2] != "theta")
    throw Error(Errc::parse, path + ":1: expected header x,rho,theta[,circ_var]");
  const bool has_var = header.size() >= 4;
  Profile p;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != header.size())
      throw Error(Errc::parse, path + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                                   " fields");
    p.bin_centers.push_back(parse_field(f[0], path, lineno));
    p.rho.push_back(parse_field(f[1], path, lineno));
    p.theta_mean.push_back(parse_field(f[2], path, lineno));
    p.circ_var.push_back(has_var ? parse_field(f[3], path, lineno) : 0.0);
    if (std::isnan(p.bin_centers.back())) throw Error(Errc::parse, path + ":" + std::to_string(lineno) + ": missing x");
  }
  return p;
}

}  // namespace vh
