#include "specop/json_io.hpp"

namespace specop {

nlohmann::json to_json(const SpectralEstimate& est) {
  const int N = est.n_frequencies();
  const int k = est.grid_size();
  std::vector<double> re;
  std::vector<double> im;
  re.reserve(static_cast<std::size_t>(N + 1) * k * k);
  im.reserve(re.capacity());
  for (int t = 0; t <= N; ++t) {
    const Eigen::MatrixXcd& s = est.slice(t);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        re.push_back(s(i, j).real());
        im.push_back(s(i, j).imag());
      }
    }
  }
  return nlohmann::json{{"T", est.length()},
                        {"N", N},
                        {"b", est.bandwidth()},
                        {"kernel_name", est.kernel().name()},
                        {"grid", est.grid().points()},
                        {"re", std::move(re)},
                        {"im", std::move(im)}};
}

nlohmann::json to_json(const TestResult& result) {
  nlohmann::json j{{"u_stat", result.u_stat},
                   {"mu0_hat", result.mu0_hat},
                   {"theta0_hat", result.theta0_hat},
                   {"t_stat", result.t_stat},
                   {"b", result.b},
                   {"T", result.T},
                   {"k", result.k},
                   {"q_profile", result.q_profile}};
  if (result.p_value) j["p_value"] = *result.p_value;
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < result.d_map.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int l = 0; l < result.d_map.cols(); ++l) row.push_back(result.d_map(r, l));
    rows.push_back(std::move(row));
  }
  j["d_map"] = std::move(rows);
  return j;
}

}  // namespace specop
