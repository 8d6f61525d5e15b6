#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "icorr/analytic.hpp"
#include "icorr/params.hpp"

namespace icorr::cli {

enum class SweepAxis { UserDensity, BlockageDensity };

// One curve of a parameter sweep: the axis variable runs over `grid` while
// everything else stays at `fixed`; each grid value is evaluated at each
// observation point.  `modes` selects which correlation columns are filled.
struct SweepSpec {
  SweepAxis axis = SweepAxis::UserDensity;
  std::vector<double> grid;  // strictly increasing, positive
  NetworkParams fixed;
  std::vector<ObservationPoint> points;
  std::vector<MobilityMode> modes;
};

// count log-spaced values from lo to hi inclusive; lo, hi > 0, count >= 2.
std::vector<double> log_grid(double lo, double hi, int count);

// Curves behind the named preset (fig1, fig2, fig3); throws on other names.
std::vector<SweepSpec> preset_sweeps(const std::string& name);

// Column header shared by all sweep CSV files.
extern const char* const kSweepHeader;

// Appends the rows of one curve (no header) in grid order.
void write_sweep_rows(const SweepSpec& spec, std::ostream& os);

// %.17g, round-trip exact for doubles.
std::string format_double(double v);

// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace icorr::cli
