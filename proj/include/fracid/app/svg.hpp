#pragma once

#include <complex>
#include <string>
#include <vector>

namespace fracid::app::svg {

// Small fixed-layout SVG renderings. Output depends only on the data, so
// files can be compared byte for byte.

struct Series {
    std::string name;
    std::vector<double> x, y;
};

std::string line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series, bool log_x = false);

std::string stem_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series);

/// Poles as crosses, zeros as circles, plus the rays at +-cone_deg and
/// +-sheet_deg (stability boundary and secondary-sheet boundary).
std::string pole_zero_map(const std::string& title, const std::vector<std::complex<double>>& poles,
                          const std::vector<std::complex<double>>& zeros, double cone_deg, double sheet_deg);

} // namespace fracid::app::svg
