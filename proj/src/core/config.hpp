#pragma once

#include "model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace prodplan {

// Parameter files are JSON objects with exactly these keys:
//
//   m      number of regimes (integer >= 1)
//   Q      row-major list of m*m transition rates
//   r      discount rate
//   theta, sigma, c, h, N, R   lists of m numbers, regime 1 first
//
// Unknown or missing keys raise ConfigError. Values are not range-checked
// here; validate_params() reports invariant violations.

ModelParams parse_params(std::string_view json_text);
ModelParams load_params(const std::filesystem::path& path);
std::string dump_params(const ModelParams& p);

} // namespace prodplan
