#include <algorithm>
#include <cmath>

#include "ttbc/errors.hpp"
#include "ttbc/fd/simulation.hpp"

namespace ttbc::fd {

double measure_reflection(std::span<const double> probe,
                          std::pair<int, int> incident_window,
                          std::pair<int, int> reflected_window) {
  auto check = [&](std::pair<int, int> w, const char* name) {
    if (w.first < 0 || w.second > static_cast<int>(probe.size()) ||
        w.first >= w.second) {
      throw EmptyWindow(std::string("measure_reflection: ") + name +
                        " window is empty or out of range");
    }
  };
  check(incident_window, "incident");
  check(reflected_window, "reflected");
  const bool disjoint = incident_window.second <= reflected_window.first ||
                        reflected_window.second <= incident_window.first;
  if (!disjoint) {
    throw Error("measure_reflection: windows overlap");
  }
  auto peak = [&](std::pair<int, int> w) {
    double out = 0.0;
    for (int i = w.first; i < w.second; ++i) out = std::max(out, std::abs(probe[i]));
    return out;
  };
  const double incident = peak(incident_window);
  if (incident == 0.0) {
    throw FitFailure("measure_reflection: incident window contains no signal");
  }
  return peak(reflected_window) / incident;
}

}  // namespace ttbc::fd
