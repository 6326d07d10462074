#pragma once

#include <string>
#include <vector>

#include "cvx/audit.hpp"
#include "cvx/solver.hpp"

namespace cvx {

/// Fixed, versioned CSV schemas.  Floating-point values are written with 17
/// significant digits and a fixed reduction order, so identical inputs give
/// byte-identical files.
namespace csv {

constexpr const char* kSweepSchema = "# cvxmin sweep csv v1";
constexpr const char* kAuditSchema = "# cvxmin audit csv v1";
constexpr const char* kFieldSchema = "# cvxmin field csv v1";

std::string sweep_table(const std::vector<SolveReport>& reports);
std::string audit_table(const std::vector<AuditOutcome>& audits);
std::string field_table(const ScalarField& u);

/// Parses a sweep table back into reports (used by the audit/report
/// subcommands).  Tolerates only the v1 schema.
std::vector<SolveReport> parse_sweep_table(const std::string& text);
/// Parses a field table; the grid must match the dump.
ScalarField parse_field_table(const std::string& text, const Grid& grid);

/// One painted node of a field dump.
struct FieldCell {
  int i = 0, j = 0;
  double value = 0;
};

/// Parses just the renderable content of a field table (no grid needed).
std::vector<FieldCell> parse_field_cells(const std::string& text, int& n_out);

}  // namespace csv

namespace svg {

/// Heatmap of a grid field: one rect per inside node, 256-step colormap,
/// deterministic output.
std::string heatmap(const ScalarField& u, const std::string& title);

/// Same rendering from raw dump cells (lets `report` run without a config).
std::string heatmap_cells(int n, const std::vector<csv::FieldCell>& cells,
                          const std::string& title);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

/// Line plot; log10 axes where requested.  Non-positive values are skipped
/// on log axes.
std::string line_plot(const std::vector<Series>& series, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel, bool logx,
                      bool logy);

}  // namespace svg

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace cvx
