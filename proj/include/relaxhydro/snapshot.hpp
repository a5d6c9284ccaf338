// snapshot.hpp
// On-disk formats. Field snapshots:
//   CSV:    header `# grid dim=<d> n=<n> L=<L> t=<t>` then one `%.17g` value
//           per line, row-major (x fastest).
//   binary: the same header line (newline-terminated), then n^dim IEEE-754
//           little-endian float64 values, row-major.
// Per-step diagnostics and sweep summaries are plain CSVs with fixed column
// sets; every artifact can be fingerprinted with a 64-bit FNV-1a checksum.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaxhydro/diagnostics.hpp"
#include "relaxhydro/grid.hpp"
#include "relaxhydro/records.hpp"

namespace relaxhydro {

void write_snapshot_csv(const std::string& path, const ScalarField& field,
                        double t);
void write_snapshot_binary(const std::string& path, const ScalarField& field,
                           double t);

struct Snapshot {
  ScalarField field;
  double t = 0.0;
};
Snapshot read_snapshot_csv(const std::string& path);
Snapshot read_snapshot_binary(const std::string& path);

// columns: step,t,dt,mass,kinetic,internal,interaction,confinement,E_total,
//          dissipation_residual
void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& rows);

struct SweepRow {
  double epsilon = 0.0;
  double sup_theta = 0.0;
  double theta0 = 0.0;
  double fitted_order_running = 0.0;  // NaN until two points are available
  double l2_density_gap_max = 0.0;
  double velocity_gap_l2l2 = 0.0;
};
// columns: epsilon,sup_theta,theta0,fitted_order_running,l2_density_gap_max,
//          velocity_gap_l2l2
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

std::uint64_t fnv1a_checksum(const std::string& path);

// Plain-text run report: one line per artifact (checksum + path) and one
// PASS/FAIL line per recorded check.
class ReportBuilder {
 public:
  void add_artifact(const std::string& path);
  void add_check(const std::string& name, bool pass, const std::string& detail);
  void add_note(const std::string& text);
  bool all_passed() const { return all_passed_; }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> lines_;
  bool all_passed_ = true;
};

}  // namespace relaxhydro
