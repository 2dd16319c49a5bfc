#include "cegprop/bench.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

namespace cegprop {

BenchReport bench_report(const TransporterCeg& ceg,
                         const CompatibleObservation& obs,
                         bool include_bn_reference) {
  BenchReport report;
  report.position_cells = ceg.position_count() - 1;
  report.edge_cells = ceg.edge_count();
  report.total_cells = report.position_cells + report.edge_cells;
  report.path_count = count_paths(ceg);
  report.include_bn_reference = include_bn_reference;

  const auto start = std::chrono::steady_clock::now();
  const auto result = propagate(ceg, obs);
  const auto stop = std::chrono::steady_clock::now();
  report.wall_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  report.counters = result.counters;
  report.event_probability = result.phi[ceg.root()];
  return report;
}

std::string bench_text(const BenchReport& report) {
  std::ostringstream os;
  os << "storage: " << report.edge_cells << " edge cells + "
     << report.position_cells << " position cells (total "
     << report.total_cells << ")\n";
  os << "paths: " << report.path_count << "\n";
  os << "event probability: " << format_double(report.event_probability)
     << "\n";
  os << "ops: backward edges " << report.counters.backward_edge_ops
     << ", backward vertices " << report.counters.backward_vertex_ops
     << ", forward edges " << report.counters.forward_edge_ops << " (total "
     << report.counters.backward_edge_ops +
            report.counters.backward_vertex_ops +
            report.counters.forward_edge_ops
     << ")\n";
  os << "wall: " << format_double(report.wall_ms) << " ms\n";
  if (report.include_bn_reference) {
    os << "reference BN junction tree (reported, not recomputed): "
       << BenchReport::kReportedBnOperations << " operations, "
       << BenchReport::kReportedBnCells << " cells\n";
  }
  return os.str();
}

std::string bench_json(const BenchReport& report, const std::string& family,
                       const std::string& model_name) {
  nlohmann::ordered_json doc;
  doc["format"] = "cegprop-bench/1";
  doc["family"] = family;
  if (!model_name.empty()) doc["model"] = model_name;
  doc["storage"] = {{"position_cells", report.position_cells},
                    {"edge_cells", report.edge_cells},
                    {"total_cells", report.total_cells}};
  doc["paths"] = report.path_count;
  doc["event_probability"] = format_double(report.event_probability);
  doc["counters"] = {
      {"backward_edge_ops", report.counters.backward_edge_ops},
      {"backward_vertex_ops", report.counters.backward_vertex_ops},
      {"forward_edge_ops", report.counters.forward_edge_ops}};
  if (report.include_bn_reference) {
    doc["reference_bn"] = {{"operations", BenchReport::kReportedBnOperations},
                           {"cells", BenchReport::kReportedBnCells},
                           {"note", "reported, not recomputed"}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace cegprop
