#pragma once

#include <string>

#include "latsim/sim_engine.hpp"

namespace latsim {

/// Fixed CSV column order matching the header; see README for the schema.
std::string csv_header();
std::string row_to_csv(const LogRow& r);

/// Writes the full log as CSV. Throws std::runtime_error on I/O failure.
void write_csv(const SimLog& log, const std::string& path);

}  // namespace latsim
