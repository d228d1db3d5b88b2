#pragma once

#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "ttbc/fd/kernels.hpp"
#include "ttbc/operator.hpp"

namespace ttbc::fd {

enum class BoundaryKind {
  Ttbc,              // full resolved boundary operator
  CharacteristicOnly,  // resolved operator with p and q forced to zero
  Dirichlet,         // u = 0 (fully reflecting reference)
};

/// Gaussian initial pulse. center is (x) in 1D and (x, y) on the disk (grid
/// Cartesian coordinates with the disk centered at the origin). `moving`
/// launches it toward the truncation boundary in 1D; the disk always starts
/// at rest.
struct GaussianPulse {
  double center_x = 0.4;
  double center_y = 0.0;
  double width = 0.05;
  double amplitude = 1.0;
  bool moving = true;
};

/// Monochromatic plane-wave drive for the oblique-reflection rig. theta is
/// measured from the boundary normal (radians). omega = 0 picks a default
/// wavelength of 0.16 * Lx. The transverse wavenumber is quantized to the
/// periodic box, adjusting the frequency and keeping theta exact. `cycles`
/// is the smooth turn-on length in periods; `probe_fraction` places the
/// first probe column.
struct PlaneWaveSource {
  double theta = 0.0;
  double omega = 0.0;
  double cycles = 2.5;
  double amplitude = 1.0;
  double probe_fraction = 0.35;
};

struct IntervalGeometry {
  double length = 1.0;
  int cells = 1000;
};

struct RectangleGeometry {
  double lx = 1.0;
  double ly = 1.0;
  int nx = 400;
  int ny = 400;
};

struct DiskGeometry {
  double radius = 1.0;
  int nr = 200;
  int ntheta = 64;
};

struct SimulationConfig {
  std::variant<IntervalGeometry, RectangleGeometry, DiskGeometry> geometry =
      IntervalGeometry{};
  double wave_speed = 1.0;
  double cfl = 0.0;       // 0 = default: 0.9 in 1D, 0.45 in 2D
  double duration = 0.0;  // 0 = geometry-dependent default
  double max_duration = 0.0;  // 0 = 50 * L / c; guards runaway sweeps
  BoundaryKind boundary = BoundaryKind::Ttbc;
  std::optional<TtbcOperator> op;  // absent: derived from geometry + wave_speed
  GaussianPulse pulse;
  PlaneWaveSource plane_wave;
  Exec exec = Exec::Parallel;
  int energy_stride = 1;
};

/// Discrete energy history. Energies use the mixed two-level form that the
/// interior leapfrog scheme conserves exactly, sampled every energy_stride
/// steps; times are the midpoint times of the sampled levels.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;
};

struct ReflectionReport {
  double angle = 0.0;  // radians
  double incident_amplitude = 0.0;
  double reflected_amplitude = 0.0;
  double measured_ratio = 0.0;
  double analytic_ratio = 0.0;
  double relative_error = 0.0;
};

struct Run1dResult {
  EnergyTrace trace;
  ReflectionReport report;
  std::vector<double> final_field;
};

/// Interval with the truncation condition on both ends: leapfrog interior,
/// trapezoidal one-sided update of the resolved boundary operator. The
/// report's measured_ratio is max |u(T)| over the incident amplitude.
Run1dResult run_1d(const SimulationConfig& config);

/// Rectangle, periodic in y: a continuous plane wave driven on the left
/// face, truncation condition on the right. After the transient settles,
/// the field on a line of probe columns is projected onto the drive
/// frequency and split by least squares into incident and reflected modes;
/// measured_ratio = |reflected| / |incident| against the analytic
/// (1 - cos theta) / (1 + cos theta). Throws FitFailure when the mode fit
/// residual exceeds 10% of the signal or the rig cannot reach steady state
/// within max_duration.
ReflectionReport run_2d_plane_reflection(const SimulationConfig& config);

struct DiskResult {
  EnergyTrace with_p0;     // full boundary operator
  EnergyTrace without_p0;  // characteristic part only (p forced to zero)
};

/// Disk of radius R on a polar grid (inner ring at h/2, boundary ring
/// exactly at R), run twice from identical initial data: once with the full
/// operator, once with its characteristic part only.
DiskResult run_2d_disk(const SimulationConfig& config);

/// Peak-amplitude ratio between two disjoint index windows [begin, end) of a
/// probe time series: max |probe| over the reflected window divided by max
/// |probe| over the incident window. Throws EmptyWindow for an empty or
/// out-of-range window, Error when the windows overlap, FitFailure when the
/// incident window contains no signal.
double measure_reflection(std::span<const double> probe,
                          std::pair<int, int> incident_window,
                          std::pair<int, int> reflected_window);

}  // namespace ttbc::fd
