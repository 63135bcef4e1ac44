#ifndef DYONLAB_REPORT_HPP
#define DYONLAB_REPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "dyonlab/dynamics.hpp"
#include "dyonlab/model.hpp"
#include "dyonlab/quantum.hpp"

namespace dyonlab {

// Locale-free shortest-exact decimal formatting at 17 significant digits;
// identical input bits produce identical text.
std::string format_double(double v);

// Write-then-rename so readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// How a check entry compares its residual against the tolerance: "le" passes
// when residual <= tolerance, "ge" (negative controls) when residual >=
// tolerance.
struct CheckEntry {
  std::string name;
  std::string equation;  // tag of the verified relation
  double residual = 0.0;
  double tolerance = 0.0;
  std::string mode = "le";
  bool pass = false;
};

struct VerificationReport {
  std::vector<CheckEntry> entries;
  bool all_pass() const;
};

std::string report_json(const VerificationReport& report);

std::string trajectory_csv(const SystemSpec& system, const TrajectoryRecord& trajectory);
std::string spectrum_csv(const std::vector<EigenResult>& levels, double s,
                         const std::vector<double>& analytic);
std::string spectrum_json(const std::vector<EigenResult>& levels, double s,
                          const std::vector<double>& analytic);
std::string selection_rules_csv(const std::vector<Transition>& table, double s);
std::string selection_rules_json(const std::vector<Transition>& table, double s);
std::string poincare_csv(const std::vector<SectionPoint>& points);

}  // namespace dyonlab

#endif
