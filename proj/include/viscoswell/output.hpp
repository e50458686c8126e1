#pragma once

#include <cstddef>
#include <ostream>
#include <string>

#include "viscoswell/experiments.hpp"
#include "viscoswell/solver.hpp"

namespace viscoswell::output {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// t_star,Z_star,p,g for every node of every `every`-th sample plus the last.
void write_fields_csv(std::ostream& os, const solver::RunRecord& record, std::size_t every);

/// t_star,mass_ratio,normalized_mass
void write_mass_csv(std::ostream& os, const experiments::MassCurve& curve);

/// grid,error
void write_convergence_csv(std::ostream& os, const experiments::ConvergenceReport& report);

/// Writes `content` to `path`, replacing any existing file. Throws
/// ConfigError("out", ...) when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace viscoswell::output
