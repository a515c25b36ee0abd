#pragma once

#include "fracid/fotf/transfer_function.hpp"
#include "fracid/fotf/wplane.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fracid::control {

/// C(s) = (K_0 s^{Nq} + K_1 s^{(N-1)q} + ... + K_N) / s
/// The integrator stays integer order; gains are listed from K_0 down.
struct ContinuousOrderPid {
    RationalOrder q{1, 4};
    std::vector<double> gains;

    int N() const { return static_cast<int>(gains.size()) - 1; }
    void validate() const;
};

/// Controller over the base gcd(q, 1), so the s^1 denominator is exact.
CommensurateFoTf controller_tf(const ContinuousOrderPid& c);

/// Closed-loop w-plane roots over the shared base of plant and controller.
WPlanePoleSet closed_loop_poles(const CommensurateFoTf& plant, const ContinuousOrderPid& c,
                                double tol_deg = kDefaultAngleTolDeg);

// {"kind": "copid", "q": "1/4", "gains": [K_0, ..., K_N]}
std::string serialize(const ContinuousOrderPid& c);
ContinuousOrderPid parse_controller(const std::string& text);
ContinuousOrderPid load_controller(const std::filesystem::path& path);

} // namespace fracid::control
