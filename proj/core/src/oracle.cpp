// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "reactpinn/errors.hpp"

namespace reactpinn {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Thomas solve for the constant-coefficient system (1 + 2r)u_i - r(u_{i-1} +
// u_{i+1}) = rhs_i on the interior, Dirichlet ends already moved to the rhs.
class Tridiag {
 public:
  Tridiag(int n, double diag, double off) : n_(n), off_(off), cp_(n) {
    cp_[0] = off / diag;
    denom_.resize(n);
    denom_[0] = diag;
    for (int i = 1; i < n; ++i) {
      denom_[i] = diag - off * cp_[i - 1];
      cp_[i] = off / denom_[i];
    }
  }

  void solve(Eigen::VectorXd& rhs) const {
    rhs[0] /= denom_[0];
    for (int i = 1; i < n_; ++i) {
      rhs[i] = (rhs[i] - off_ * rhs[i - 1]) / denom_[i];
    }
    for (int i = n_ - 2; i >= 0; --i) {
      rhs[i] -= cp_[i] * rhs[i + 1];
    }
  }

 private:
  int n_;
  double off_;
  std::vector<double> cp_;
  std::vector<double> denom_;
};

FDGrid make_grid(const ProblemSpec& spec, int nx, int nt) {
  if (nx < 3 || nt < 2) throw ConfigError("fd grid needs nx >= 3, nt >= 2");
  FDGrid g;
  g.nx = nx;
  g.nt = nt;
  g.x_range = *spec.train_domain.x_range;
  g.t_range = {spec.train_domain.t_range[0],
               std::max(spec.train_domain.t_range[1], spec.test_domain.t_range[1])};
  g.dx = (g.x_range[1] - g.x_range[0]) / (nx - 1);
  g.dt = (g.t_range[1] - g.t_range[0]) / (nt - 1);
  g.values.resize(nx, nt);
  for (int i = 0; i < nx; ++i) {
    g.values(i, 0) = ic_value(spec, g.x_range[0] + i * g.dx);
  }
  return g;
}

// Crank-Nicolson for u_t = kappa u_xx + f(x,t), constant Dirichlet ends:
// (1 + r) u_i - r/2 (u_{i-1} + u_{i+1}) = u_i^n + r/2 lap(u^n)_i + dt f_i,
// r = kappa dt/dx^2. The implicit boundary terms move to the rhs.
template <typename Source>
void solve_cn(FDGrid& g, const ProblemSpec& spec, double kappa, Source f) {
  const int nx = g.nx;
  const int ni = nx - 2;
  const double r = kappa * g.dt / (g.dx * g.dx);
  Tridiag sys(ni, 1.0 + r, -r / 2.0);
  Eigen::VectorXd rhs(ni);
  const double lo = bc_value(spec, false, 0), hi = bc_value(spec, true, 0);
  for (int j = 1; j < g.nt; ++j) {
    const double tm = g.t_range[0] + (j - 0.5) * g.dt;
    for (int i = 1; i <= ni; ++i) {
      const double u = g.values(i, j - 1);
      const double lap = g.values(i - 1, j - 1) - 2.0 * u + g.values(i + 1, j - 1);
      rhs[i - 1] = u + 0.5 * r * lap + g.dt * f(g.x_range[0] + i * g.dx, tm);
    }
    rhs[0] += 0.5 * r * lo;
    rhs[ni - 1] += 0.5 * r * hi;
    sys.solve(rhs);
    g.values(0, j) = lo;
    g.values(nx - 1, j) = hi;
    for (int i = 0; i < ni; ++i) g.values(i + 1, j) = rhs[i];
  }
}

// One output interval of the semi-implicit scheme (implicit CN diffusion,
// explicit nonlinearity), `sub` internal steps.
void semi_implicit_march(const ProblemSpec& spec, double kappa,
                         const Eigen::VectorXd& from, Eigen::VectorXd& to,
                         double dt_out, int sub, double dx) {
  const int nx = static_cast<int>(from.size());
  const int ni = nx - 2;
  const double dt = dt_out / sub;
  const double r = kappa * dt / (dx * dx);
  Tridiag sys(ni, 1.0 + r, -r / 2.0);
  const double lo = bc_value(spec, false, 0), hi = bc_value(spec, true, 0);
  Eigen::VectorXd u = from, rhs(ni);
  const bool burgers = spec.name == ProblemName::Burgers;
  for (int s = 0; s < sub; ++s) {
    for (int i = 1; i <= ni; ++i) {
      const double lap = u[i - 1] - 2.0 * u[i] + u[i + 1];
      double nonlinear;
      if (burgers) {
        // conservative central flux of u^2/2
        nonlinear = -(u[i + 1] * u[i + 1] - u[i - 1] * u[i - 1]) / (4.0 * dx);
      } else {
        nonlinear = 5.0 * (u[i] - u[i] * u[i] * u[i]);
      }
      rhs[i - 1] = u[i] + 0.5 * r * lap + dt * nonlinear;
    }
    rhs[0] += 0.5 * r * lo;
    rhs[ni - 1] += 0.5 * r * hi;
    sys.solve(rhs);
    for (int i = 0; i < ni; ++i) u[i + 1] = rhs[i];
    u[0] = lo;
    u[nx - 1] = hi;
  }
  to = u;
}

void solve_semi_implicit(FDGrid& g, const ProblemSpec& spec, double kappa) {
  // march the whole grid at `sub` internal steps per output step, then double
  // until two successive refinements agree to 1e-4 in max norm
  const double dt_stable =
      spec.name == ProblemName::Burgers ? 0.4 * g.dx : 0.02;
  int sub = std::max(1, static_cast<int>(std::ceil(g.dt / dt_stable)));
  Eigen::MatrixXd prev;
  for (int attempt = 0; attempt < 12; ++attempt) {
    for (int j = 1; j < g.nt; ++j) {
      Eigen::VectorXd next;
      semi_implicit_march(spec, kappa, g.values.col(j - 1), next, g.dt, sub, g.dx);
      g.values.col(j) = next;
    }
    if (prev.size() > 0) {
      g.refinement_delta = (g.values - prev).cwiseAbs().maxCoeff();
      if (g.refinement_delta <= 1e-4) return;
    }
    prev = g.values;
    sub *= 2;
  }
  throw NumericError("semi-implicit solver did not converge under time-step refinement for " +
                     problem_name(spec.name));
}

void solve_wave(FDGrid& g, const ProblemSpec& spec) {
  const double c = spec.constants.at("c");
  const double lambda = c * g.dt / g.dx;
  if (lambda > 1.0 + 1e-12) {
    throw ConfigError("wave leapfrog violates CFL: c*dt/dx = " + std::to_string(lambda));
  }
  const double l2 = lambda * lambda;
  const int nx = g.nx;
  // first step from zero initial velocity
  for (int i = 1; i < nx - 1; ++i) {
    const double lap = g.values(i - 1, 0) - 2.0 * g.values(i, 0) + g.values(i + 1, 0);
    g.values(i, 1) = g.values(i, 0) + 0.5 * l2 * lap;
  }
  g.values(0, 1) = 0.0;
  g.values(nx - 1, 1) = 0.0;
  for (int j = 2; j < g.nt; ++j) {
    for (int i = 1; i < nx - 1; ++i) {
      const double lap =
          g.values(i - 1, j - 1) - 2.0 * g.values(i, j - 1) + g.values(i + 1, j - 1);
      g.values(i, j) = 2.0 * g.values(i, j - 1) - g.values(i, j - 2) + l2 * lap;
    }
    g.values(0, j) = 0.0;
    g.values(nx - 1, j) = 0.0;
  }
}

std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

FDGrid fd_solve(const ProblemSpec& spec, int nx, int nt) {
  return fd_solve(spec, nx, nt, nullptr);
}

FDGrid fd_solve(const ProblemSpec& spec, int nx, int nt, double (*ic)(double)) {
  if (!spec.train_domain.x_range) {
    throw ConfigError("fd_solve needs a spatial problem");
  }
  FDGrid g = make_grid(spec, nx, nt);
  if (ic != nullptr) {
    for (int i = 0; i < nx; ++i) g.values(i, 0) = ic(g.x_range[0] + i * g.dx);
  }
  switch (spec.name) {
    case ProblemName::Heat:
      solve_cn(g, spec, spec.constants.at("alpha"), [](double, double) { return 0.0; });
      break;
    case ProblemName::Diffusion:
      solve_cn(g, spec, 1.0, [](double x, double t) {
        return std::exp(-t) * (kPi * kPi - 1.0) * std::sin(kPi * x);
      });
      break;
    case ProblemName::Burgers:
      solve_semi_implicit(g, spec, spec.constants.at("nu"));
      break;
    case ProblemName::AllenCahn:
      solve_semi_implicit(g, spec, spec.constants.at("d"));
      break;
    case ProblemName::Wave:
      solve_wave(g, spec);
      break;
    default:
      throw ConfigError("no finite-difference solver for " + problem_name(spec.name));
  }
  if (!g.values.allFinite()) {
    throw NumericError("finite-difference solve produced non-finite values");
  }
  return g;
}

double interpolate(const FDGrid& g, double x, double t) {
  const double eps = 1e-12;
  if (x < g.x_range[0] - eps || x > g.x_range[1] + eps || t < g.t_range[0] - eps ||
      t > g.t_range[1] + eps) {
    throw RangeError("interpolation point outside the reference grid");
  }
  const double fx = std::clamp((x - g.x_range[0]) / g.dx, 0.0, double(g.nx - 1));
  const double ft = std::clamp((t - g.t_range[0]) / g.dt, 0.0, double(g.nt - 1));
  const int i0 = std::min(static_cast<int>(fx), g.nx - 2);
  const int j0 = std::min(static_cast<int>(ft), g.nt - 2);
  const double ax = fx - i0, at = ft - j0;
  return (1 - ax) * (1 - at) * g.values(i0, j0) + ax * (1 - at) * g.values(i0 + 1, j0) +
         (1 - ax) * at * g.values(i0, j0 + 1) + ax * at * g.values(i0 + 1, j0 + 1);
}

std::string default_cache_dir() {
  if (const char* env = std::getenv("REACTPINN_CACHE_DIR")) return env;
  return ".reactpinn-cache";
}

FDGrid fd_solve_cached(const ProblemSpec& spec, int nx, int nt,
                       const std::string& cache_dir) {
  namespace fs = std::filesystem;
  const std::string stem = problem_name(spec.name) + "_nx" + std::to_string(nx) +
                           "_nt" + std::to_string(nt);
  const fs::path bin = fs::path(cache_dir) / (stem + ".bin");
  const fs::path hdr = fs::path(cache_dir) / (stem + ".json");

  if (fs::exists(bin) && fs::exists(hdr)) {
    try {
      std::ifstream hin(hdr);
      nlohmann::json j;
      hin >> j;
      std::ifstream fin(bin, std::ios::binary);
      std::vector<char> bytes((std::istreambuf_iterator<char>(fin)),
                              std::istreambuf_iterator<char>());
      if (j.at("problem") == problem_name(spec.name) && j.at("nx") == nx &&
          j.at("nt") == nt &&
          j.at("checksum") == fnv1a(bytes.data(), bytes.size()) &&
          bytes.size() == sizeof(double) * static_cast<std::size_t>(nx) * nt) {
        FDGrid g;
        g.nx = nx;
        g.nt = nt;
        g.x_range = {j.at("x_range")[0], j.at("x_range")[1]};
        g.t_range = {j.at("t_range")[0], j.at("t_range")[1]};
        g.dx = (g.x_range[1] - g.x_range[0]) / (nx - 1);
        g.dt = (g.t_range[1] - g.t_range[0]) / (nt - 1);
        g.values.resize(nx, nt);
        std::memcpy(g.values.data(), bytes.data(), bytes.size());
        return g;
      }
    } catch (...) {
      // fall through to recompute on any cache damage
    }
  }

  FDGrid g = fd_solve(spec, nx, nt);
  std::error_code ec;
  fs::create_directories(cache_dir, ec);
  const auto* data = reinterpret_cast<const char*>(g.values.data());
  const std::size_t n_bytes = sizeof(double) * static_cast<std::size_t>(nx) * nt;
  std::ofstream fout(bin, std::ios::binary);
  fout.write(data, static_cast<std::streamsize>(n_bytes));
  fout.close();
  nlohmann::json j{{"problem", problem_name(spec.name)},
                   {"nx", nx},
                   {"nt", nt},
                   {"x_range", {g.x_range[0], g.x_range[1]}},
                   {"t_range", {g.t_range[0], g.t_range[1]}},
                   {"checksum", fnv1a(data, n_bytes)}};
  std::ofstream hout(hdr);
  hout << j.dump(2) << "\n";
  return g;
}

}  // namespace reactpinn
