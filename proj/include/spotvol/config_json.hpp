#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spotvol/bench.hpp"
#include "spotvol/simulate.hpp"
#include "spotvol/types.hpp"

namespace spotvol::config {

/// Estimator section, e.g.
/// {"estimator": {"p_n":114, "h":"n^-0.26", "u":"auto", "d_n":0,
///                "kernel":"k1", "weight":"triangle",
///                "debias":{"method":"none"}}}
/// h may be a number or a bandwidth rule string; n resolves rules.
EstimatorConfig parse_estimator(const std::string& json_text, std::size_t n);

/// Simulation config, sections "grid", "price", "heston", "jumps", "noise";
/// missing sections fall back to the reference design defaults.
SimConfig parse_sim(const std::string& json_text);

/// Bench/compare grid: {"n":..., "reps":..., "defaults":{cell fields},
/// "cells":[{overrides}...]}.
struct BenchGrid {
  std::vector<bench::BenchCell> cells;
  long reps = 0;  // 0 = take from the command line
};
BenchGrid parse_grid(const std::string& json_text);

std::string read_file(const std::string& path);

}  // namespace spotvol::config
