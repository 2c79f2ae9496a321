// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <array>
#include <string>

#include "reactpinn/problems.hpp"

namespace reactpinn {

/// Reference solution on a uniform space-time grid. Column j holds the
/// spatial profile at time t_j; boundary rows equal the Dirichlet values
/// exactly.
struct FDGrid {
  int nx = 0;
  int nt = 0;
  double dx = 0;
  double dt = 0;
  std::array<double, 2> x_range{0, 1};
  std::array<double, 2> t_range{0, 1};
  Eigen::MatrixXd values;  // nx x nt
  // max-norm change of the last internal time-step refinement (nonlinear
  // problems only); the grid is accepted once this is <= 1e-4
  double refinement_delta = 0;
};

/// Crank-Nicolson for heat/diffusion, semi-implicit stepping (implicit
/// diffusion, explicit nonlinearity) with time-step refinement for Burgers
/// and Allen-Cahn, explicit leapfrog under CFL for the wave equation.
FDGrid fd_solve(const ProblemSpec& spec, int nx, int nt);

/// Same solver with a replaced initial profile (testing seam).
FDGrid fd_solve(const ProblemSpec& spec, int nx, int nt, double (*ic)(double));

/// Bilinear interpolation; throws RangeError outside the grid.
double interpolate(const FDGrid& grid, double x, double t);

/// Disk-backed fd_solve: grids are stored as flat binary plus a JSON header
/// (problem, resolution, ranges, checksum) keyed by problem and resolution.
FDGrid fd_solve_cached(const ProblemSpec& spec, int nx, int nt,
                       const std::string& cache_dir);

/// Default cache directory (REACTPINN_CACHE_DIR or ./.reactpinn-cache).
std::string default_cache_dir();

}  // namespace reactpinn
