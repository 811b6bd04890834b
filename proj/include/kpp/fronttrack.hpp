#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "kpp/field.hpp"

namespace kpp::fronttrack {

/// Level-set positions x_level(t_k); t_k strictly increasing.
struct FrontTrace {
  double level = 0.5;
  std::vector<double> t;
  std::vector<double> x;

  /// Appends a sample; throws ParameterError unless t exceeds the last time.
  void push(double time, double position);
  std::size_t size() const { return t.size(); }
};

/// Largest x with u(x) >= level, linearly interpolated towards the next
/// node. Empty when the level is never reached.
std::optional<double> front_position(const solver::Grid& grid, std::span<const double> u,
                                     double level);
std::optional<double> front_position(const solver::Field& field, double level);

struct WindowedSpeeds {
  double window;
  /// Right end of each window.
  std::vector<double> t;
  std::vector<double> speed;
};

/// Least-squares slope over [t - W, t] for t stepping by W/4 from the first
/// sample time + W. Throws InsufficientDataError when the trace spans < 2W.
WindowedSpeeds windowed_speeds(const FrontTrace& trace, double window);

struct SpeedEstimates {
  double w_low;
  double w_up;
};

/// Min and max windowed speed after dropping the first transient_fraction
/// of windows, transient_fraction in [0, 0.9].
SpeedEstimates estimate_spreading_speeds(const WindowedSpeeds& speeds,
                                         double transient_fraction);

struct TrackerConfig {
  double level = 0.5;
  double window = 10.0;
  double transient = 0.3;
};

SpeedEstimates estimate_spreading_speeds(const FrontTrace& trace, const TrackerConfig& config);

/// Columns t,x_front,speed_windowed; the speed column holds the latest window
/// ending at or before t and is empty before the first window closes.
void write_trace_csv(std::ostream& out, const FrontTrace& trace, const WindowedSpeeds& speeds);

}  // namespace kpp::fronttrack
