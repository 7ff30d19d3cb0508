#include "specop/simulate.hpp"

#include <cmath>

#include "specop/errors.hpp"
#include "specop/numerics.hpp"
#include "specop/parallel.hpp"

namespace specop {

FMAModel FMAModel::create(double a2, int T, const Grid& grid) {
  if (T < 4) throw ContractViolation("FMAModel: T must be at least 4");
  const double normalizer =
      4.0 * adaptive_simpson([](double w) { return std::exp(-w * w); }, 0.0, 1.0, 1e-12);
  const int k = grid.size();
  Eigen::MatrixXd psi(k, k);
  for (int i = 0; i < k; ++i) {
    const double si = grid.point(i);
    for (int j = 0; j < k; ++j) {
      const double sj = grid.point(j);
      psi(i, j) = std::exp(-(si * si + sj * sj) / 2.0) / normalizer;
    }
  }
  return FMAModel(a2, T, grid, std::move(psi), normalizer);
}

Eigen::VectorXd brownian_bridge(const Grid& grid, GaussianSampler& rng) {
  const int k = grid.size();
  Eigen::VectorXd w(k);
  double prev_s = 0.0;
  double prev_w = 0.0;
  for (int j = 0; j < k; ++j) {
    const double s = grid.point(j);
    prev_w += rng() * std::sqrt(s - prev_s);
    w(j) = prev_w;
    prev_s = s;
  }
  const double w1 = prev_w + rng() * std::sqrt(1.0 - prev_s);
  for (int j = 0; j < k; ++j) w(j) -= grid.point(j) * w1;
  return w;
}

Eigen::VectorXd apply_a1(const FMAModel& model, const Eigen::VectorXd& curve) {
  return model.psi * curve / model.grid.size();
}

std::pair<FunctionalSample, FunctionalSample> gen_pair(const FMAModel& model,
                                                       const RngStream& stream,
                                                       int n_basis) {
  const int T = model.T;
  const int k = model.grid.size();

  GaussianSampler rng_eps(stream.child(0));
  GaussianSampler rng_e(stream.child(1));

  // Row m of eps holds innovation eps_{m-1} (m = 0 is the pre-sample
  // eps_{-1}); row m of ee holds e_m.
  Eigen::MatrixXd eps(T + 2, k);
  for (int m = 0; m < T + 2; ++m) eps.row(m) = brownian_bridge(model.grid, rng_eps).transpose();
  Eigen::MatrixXd ee(T + 1, k);
  for (int m = 0; m < T + 1; ++m) ee.row(m) = brownian_bridge(model.grid, rng_e).transpose();

  // x_t = A1(eps_{t-1}) + a2 eps_{t-2} + eps_t, rows t = 1..T.
  Eigen::MatrixXd x = eps.middleRows(1, T) * model.psi / k;
  x += model.a2 * eps.middleRows(0, T);
  x += eps.middleRows(2, T);

  // y_t = A1(e_{t-1}) + e_t.
  Eigen::MatrixXd y = ee.middleRows(0, T) * model.psi / k;
  y += ee.middleRows(1, T);

  FunctionalSample xs(model.grid, std::move(x));
  FunctionalSample ys(model.grid, std::move(y));
  if (n_basis > 0) {
    xs = fourier_smooth(xs, n_basis);
    ys = fourier_smooth(ys, n_basis);
  }
  return {std::move(xs), std::move(ys)};
}

namespace {

void validate(const ExperimentConfig& c) {
  if (c.T_list.empty() || c.b_list.empty() || c.a2_list.empty() || c.alpha_list.empty()) {
    throw ContractViolation("run_table: every parameter list must be non-empty");
  }
  if (c.R < 1 || c.B < 1) throw ContractViolation("run_table: R and B must be >= 1");
  for (double a : c.alpha_list) {
    if (!(a > 0.0 && a < 1.0)) throw ContractViolation("run_table: alpha must lie in (0, 1)");
  }
}

}  // namespace

std::vector<CellResult> run_table(const ExperimentConfig& config, const WeightKernel& kernel) {
  validate(config);

  struct Cell {
    int T;
    double b;
    double a2;
  };
  std::vector<Cell> cells;
  for (int T : config.T_list)
    for (double b : config.b_list)
      for (double a2 : config.a2_list) cells.push_back(Cell{T, b, a2});

  const int n_cells = static_cast<int>(cells.size());
  const int R = config.R;
  std::vector<std::vector<double>> p_values(cells.size(),
                                            std::vector<double>(static_cast<std::size_t>(R)));
  std::vector<std::vector<double>> t_stats = p_values;

  // Models depend on (T, a2) only; the bandwidth is free per cell. Build one
  // model per cell up front to keep the hot loop allocation-light.
  std::vector<FMAModel> models;
  models.reserve(cells.size());
  const Grid grid = Grid::make(config.grid_policy, config.k);
  for (const Cell& c : cells) models.push_back(FMAModel::create(c.a2, c.T, grid));

  const RngStream root = RngStream::root(config.master_seed);
  parallel_for(n_cells * R, config.workers, [&](int idx) {
    const int c = idx / R;
    const int r = idx % R;
    const RngStream rep = root.child(static_cast<std::uint64_t>(c)).child(static_cast<std::uint64_t>(r));

    auto [x, y] = gen_pair(models[static_cast<std::size_t>(c)], rep.child(0), config.n_basis);
    BootstrapPlan plan;
    plan.B = config.B;
    plan.workers = 1;  // repetitions already fill the worker budget
    plan.studentization = config.studentization;
    const BootstrapRun out =
        run_stream(center(x), center(y), cells[static_cast<std::size_t>(c)].b, kernel, plan,
                   rep.child(1));
    p_values[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = *out.result.p_value;
    t_stats[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = out.result.t_stat;
  });

  std::vector<CellResult> results(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult& res = results[c];
    res.T = cells[c].T;
    res.b = cells[c].b;
    res.a2 = cells[c].a2;
    res.alpha = config.alpha_list;
    res.p_values = std::move(p_values[c]);
    res.t_stats = std::move(t_stats[c]);
    for (double alpha : config.alpha_list) {
      int hits = 0;
      for (double p : res.p_values) {
        if (p <= alpha) ++hits;
      }
      const double rate = static_cast<double>(hits) / R;
      res.rejection_rate.push_back(rate);
      res.std_error.push_back(std::sqrt(rate * (1.0 - rate) / R));
    }
  }
  return results;
}

NullDensityResult run_null_density(int T, double b, int R_exact, int B, int n_datasets,
                                   std::uint64_t master_seed, const WeightKernel& kernel,
                                   int workers, int n_basis, int k,
                                   GridPolicy grid_policy) {
  if (R_exact < 1) throw ContractViolation("run_null_density: R_exact must be >= 1");
  if (n_datasets < 0 || n_datasets > R_exact) {
    throw ContractViolation("run_null_density: n_datasets must lie in [0, R_exact]");
  }
  if (n_datasets > 0 && B < 1) {
    throw ContractViolation("run_null_density: B must be >= 1 when datasets are chosen");
  }

  const Grid grid = Grid::make(grid_policy, k);
  const FMAModel model = FMAModel::create(0.0, T, grid);
  const RngStream root = RngStream::root(master_seed);
  const RngStream data = root.child(0);

  NullDensityResult out;
  out.exact_t.resize(static_cast<std::size_t>(R_exact));
  parallel_for(R_exact, workers, [&](int r) {
    auto [x, y] = gen_pair(model, data.child(static_cast<std::uint64_t>(r)).child(0), n_basis);
    const SpectralEstimate fx = smooth(dft_frame(center(x)), b, kernel);
    const SpectralEstimate fy = smooth(dft_frame(center(y)), b, kernel);
    out.exact_t[static_cast<std::size_t>(r)] = evaluate(fx, fy).t_stat;
  });

  // Without-replacement pick via partial Fisher-Yates on the index array.
  std::vector<int> indices(static_cast<std::size_t>(R_exact));
  for (int i = 0; i < R_exact; ++i) indices[static_cast<std::size_t>(i)] = i;
  std::mt19937_64 pick = root.child(1).engine();
  for (int i = 0; i < n_datasets; ++i) {
    const int j = i + static_cast<int>(pick() % static_cast<std::uint64_t>(R_exact - i));
    std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
  }
  indices.resize(static_cast<std::size_t>(n_datasets));

  for (int r : indices) {
    const RngStream rep = data.child(static_cast<std::uint64_t>(r));
    auto [x, y] = gen_pair(model, rep.child(0), n_basis);
    BootstrapPlan plan;
    plan.B = B;
    plan.workers = workers;
    const BootstrapRun run_out = run_stream(center(x), center(y), b, kernel, plan, rep.child(1));
    out.dataset_indices.push_back(r);
    out.bootstrap_t.push_back(run_out.distribution.t_star);
  }
  return out;
}

}  // namespace specop
