#include "viscoswell/output.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "viscoswell/errors.hpp"

namespace viscoswell::output {

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_fields_csv(std::ostream& os, const solver::RunRecord& record, std::size_t every) {
  os << "t_star,Z_star,p,g\n";
  const std::size_t k_last = record.samples() ? record.samples() - 1 : 0;
  for (std::size_t k = 0; k < record.samples(); ++k) {
    if (k % every != 0 && k != k_last) continue;
    const auto& p = record.p_fields[k];
    const auto& g = record.g_fields[k];
    const ivp::Grid grid{p.size()};
    const std::string t = format_double(record.times[k]);
    for (std::size_t i = 0; i < p.size(); ++i) {
      os << t << ',' << format_double(grid.z(i)) << ',' << format_double(p[i]) << ','
         << format_double(g[i]) << '\n';
    }
  }
}

void write_mass_csv(std::ostream& os, const experiments::MassCurve& curve) {
  os << "t_star,mass_ratio,normalized_mass\n";
  for (std::size_t k = 0; k < curve.times.size(); ++k) {
    os << format_double(curve.times[k]) << ',' << format_double(curve.mass_ratio[k]) << ','
       << format_double(curve.normalized[k]) << '\n';
  }
}

void write_convergence_csv(std::ostream& os, const experiments::ConvergenceReport& report) {
  os << "grid,error\n";
  for (std::size_t k = 0; k < report.grids.size(); ++k) {
    os << report.grids[k] << ',' << format_double(report.errors[k]) << '\n';
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("out", "cannot write '" + path + "'");
  f << content;
  f.close();
  if (!f) throw ConfigError("out", "write failed for '" + path + "'");
}

}  // namespace viscoswell::output
