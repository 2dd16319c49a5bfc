#pragma once

#include <cstdint>
#include <string>

#include "cegprop/ceg.hpp"
#include "cegprop/observation.hpp"
#include "cegprop/propagation.hpp"

namespace cegprop {

// Storage and operation-count report for one propagation run. The junction
// tree figures for the medical example are reference values reported
// alongside, never recomputed; no Bayesian network machinery exists here.
struct BenchReport {
  std::uint64_t position_cells = 0;  // non-sink positions (pi-table owners)
  std::uint64_t edge_cells = 0;      // probability cells, one per edge
  std::uint64_t total_cells = 0;
  std::uint64_t path_count = 0;
  double event_probability = 0.0;
  OperationCounters counters;
  double wall_ms = 0.0;  // text report only; excluded from JSON output

  bool include_bn_reference = false;
  static constexpr int kReportedBnOperations = 43;
  static constexpr int kReportedBnCells = 27;
};

// Runs propagate and measures it. Propagation errors pass through.
BenchReport bench_report(const TransporterCeg& ceg,
                         const CompatibleObservation& obs,
                         bool include_bn_reference = false);

std::string bench_text(const BenchReport& report);

// Deterministic machine-readable form (wall time omitted).
std::string bench_json(const BenchReport& report, const std::string& family,
                       const std::string& model_name);

}  // namespace cegprop
