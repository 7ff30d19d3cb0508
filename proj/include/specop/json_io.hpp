#pragma once

#include <json.hpp>

#include "specop/spectral.hpp"
#include "specop/teststat.hpp"

namespace specop {

// {T, N, b, kernel_name, grid, re[], im[]}; re/im are flat arrays in
// frequency-major row-major order, length (N+1) k^2.
nlohmann::json to_json(const SpectralEstimate& est);

// {u_stat, mu0_hat, theta0_hat, t_stat, p_value, b, T, k, q_profile, d_map};
// p_value is omitted while unset, d_map is an array of rows.
nlohmann::json to_json(const TestResult& result);

}  // namespace specop
