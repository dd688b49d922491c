#include "vh/particle_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "vh/error.hpp"
#include "vh/rng.hpp"
#include "vh/von_mises.hpp"

namespace vh {

namespace {

// Fine-grid cell size in units of the mean interparticle spacing.
constexpr double kCellX = 0.25, kCellY = 4.0;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kInitStream = 0;

double wrap_coord(double v, double L) {
  v = std::fmod(v, L);
  if (v < 0.0) v += L;
  if (v >= L) v = 0.0;
  return v;
}

long floor_div(double v, double h) {
  const double q = v / h;
  const auto t = static_cast<long>(q);
  return static_cast<double>(t) > q ? t - 1 : t;
}

long ceil_div(double v, double h) { return -floor_div(-v, h); }

// i mod n for -n <= i < 2n, the general case otherwise.
std::size_t wrap_index(long i, std::size_t n) {
  const long m = static_cast<long>(n);
  if (i >= 0 && i < m) return static_cast<std::size_t>(i);
  if (i < 0 && i >= -m) return static_cast<std::size_t>(i + m);
  if (i >= m && i < 2 * m) return static_cast<std::size_t>(i - m);
  long r = i % m;
  if (r < 0) r += m;
  return static_cast<std::size_t>(r);
}

// Cell list with cells no smaller than R; used by the reference kernel and
// single-particle queries.
struct CoarseCells {
  std::size_t ncx = 1, ncy = 1;
  double hx = 1.0, hy = 1.0;
  std::vector<std::size_t> start, order;

  explicit CoarseCells(const ParticleEnsemble& e) {
    ncx = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(e.Lx / e.R)));
    ncy = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(e.Ly / e.R)));
    hx = e.Lx / static_cast<double>(ncx);
    hy = e.Ly / static_cast<double>(ncy);
    const std::size_t n = e.size();
    std::vector<std::size_t> cell(n);
    start.assign(ncx * ncy + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
      cell[k] = cell_of(e.x[k], e.y[k]);
      ++start[cell[k] + 1];
    }
    for (std::size_t c = 0; c < ncx * ncy; ++c) start[c + 1] += start[c];
    order.resize(n);
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t k = 0; k < n; ++k) order[fill[cell[k]]++] = k;
  }

  std::size_t cell_of(double x, double y) const {
    const std::size_t cx = std::min(ncx - 1, static_cast<std::size_t>(x / hx));
    const std::size_t cy = std::min(ncy - 1, static_cast<std::size_t>(y / hy));
    return cy * ncx + cx;
  }

  // Distinct cells in the 3x3 block around the cell of (x, y).
  std::vector<std::size_t> block(double x, double y) const {
    const auto cx = static_cast<long>(std::min(ncx - 1, static_cast<std::size_t>(x / hx)));
    const auto cy = static_cast<long>(std::min(ncy - 1, static_cast<std::size_t>(y / hy)));
    std::vector<std::size_t> out;
    for (long oy = -1; oy <= 1; ++oy)
      for (long ox = -1; ox <= 1; ++ox) out.push_back(wrap_index(cy + oy, ncy) * ncx + wrap_index(cx + ox, ncx));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

// Minimal-image |offset| range over the band [o1, o2]; the band lies in
// [-L, L] and is shorter than L / 2.
std::pair<double, double> band_range(double o1, double o2, double L) {
  const double half = 0.5 * L;
  auto m = [L, half](double o) {
    const double a = std::abs(o);
    return a <= half ? a : L - a;
  };
  const double m1 = m(o1), m2 = m(o2);
  double near = std::min(m1, m2), far = std::max(m1, m2);
  if (o1 <= 0.0 && o2 >= 0.0) near = 0.0;
  if ((o1 <= half && o2 >= half) || (o1 <= -half && o2 >= -half)) far = half;
  if (o1 <= -L || o2 >= L) near = 0.0;
  return {near, far};
}

// Fine grid: particles sorted by cell with per-row prefix sums of the
// cell totals of cos / sin.
struct FineGrid {
  std::size_t nxc = 1, nyc = 1;
  double hx = 1.0, hy = 1.0;
  std::vector<std::size_t> start;
  std::vector<double> px, py, pc, ps;  // particle data in cell order
  std::vector<std::size_t> index;      // original particle index
  std::vector<double> prow_c, prow_s;  // nyc rows of nxc + 1 prefix entries

  explicit FineGrid(const ParticleEnsemble& e) {
    const double n = static_cast<double>(std::max<std::size_t>(1, e.size()));
    const double density = n / (e.Lx * e.Ly);
    // Rows cost a fixed overhead each, partial cells cost per particle:
    // tall thin cells balance the two.
    const double h = 1.0 / std::sqrt(density);
    const double h_x = std::min(e.R, kCellX * h), h_y = std::min(e.R, kCellY * h);
    nxc = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(e.Lx / h_x)));
    nyc = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(e.Ly / h_y)));
    hx = e.Lx / static_cast<double>(nxc);
    hy = e.Ly / static_cast<double>(nyc);
    const std::size_t np = e.size();
    std::vector<std::size_t> cell(np);
    start.assign(nxc * nyc + 1, 0);
    for (std::size_t k = 0; k < np; ++k) {
      const std::size_t cx = std::min(nxc - 1, static_cast<std::size_t>(e.x[k] / hx));
      const std::size_t cy = std::min(nyc - 1, static_cast<std::size_t>(e.y[k] / hy));
      cell[k] = cy * nxc + cx;
      ++start[cell[k] + 1];
    }
    for (std::size_t c = 0; c < nxc * nyc; ++c) start[c + 1] += start[c];
    px.resize(np);
    py.resize(np);
    pc.resize(np);
    ps.resize(np);
    index.resize(np);
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t k = 0; k < np; ++k) {
      const std::size_t p = fill[cell[k]]++;
      index[p] = k;
      px[p] = e.x[k];
      py[p] = e.y[k];
      pc[p] = std::cos(e.theta[k]);
      ps[p] = std::sin(e.theta[k]);
    }
    prow_c.assign(nyc * (nxc + 1), 0.0);
    prow_s.assign(nyc * (nxc + 1), 0.0);
    for (std::size_t r = 0; r < nyc; ++r) {
      double sc = 0.0, ss = 0.0;
      for (std::size_t c = 0; c < nxc; ++c) {
        const std::size_t id = r * nxc + c;
        for (std::size_t p = start[id]; p < start[id + 1]; ++p) {
          sc += pc[p];
          ss += ps[p];
        }
        prow_c[r * (nxc + 1) + c + 1] = sc;
        prow_s[r * (nxc + 1) + c + 1] = ss;
      }
    }
  }

  // Sum over the unwrapped column range [a, a + len), len <= nxc.
  void add_range(std::size_t row, long a, std::size_t len, double& jx, double& jy) const {
    if (len == 0) return;
    const std::size_t aw = wrap_index(a, nxc);
    const double* pcr = &prow_c[row * (nxc + 1)];
    const double* psr = &prow_s[row * (nxc + 1)];
    if (aw + len <= nxc) {
      jx += pcr[aw + len] - pcr[aw];
      jy += psr[aw + len] - psr[aw];
    } else {
      const std::size_t tail = aw + len - nxc;
      jx += pcr[nxc] - pcr[aw] + pcr[tail];
      jy += psr[nxc] - psr[aw] + psr[tail];
    }
  }

  // Exact test of every particle in the unwrapped column range [a, b] of a
  // row. Cells of a row are contiguous in cell order, so the range is at
  // most two contiguous particle runs.
  void add_partial(const ParticleEnsemble& e, std::size_t row, long a, long b, double xk, double yk, double& jx,
                   double& jy) const {
    if (b < a) return;
    const auto len = static_cast<std::size_t>(b - a + 1);
    const std::size_t aw = wrap_index(a, nxc);
    const std::size_t base = row * nxc;
    if (aw + len <= nxc) {
      add_run(e, start[base + aw], start[base + aw + len], xk, yk, jx, jy);
    } else {
      add_run(e, start[base + aw], start[base + nxc], xk, yk, jx, jy);
      add_run(e, start[base], start[base + aw + len - nxc], xk, yk, jx, jy);
    }
  }

  void add_run(const ParticleEnsemble& e, std::size_t p0, std::size_t p1, double xk, double yk, double& jx,
               double& jy) const {
    const double r2 = e.R * e.R, Lx = e.Lx, Ly = e.Ly;
    double sx = 0.0, sy = 0.0;
    for (std::size_t p = p0; p < p1; ++p) {
      const double in = periodic_dist2(px[p] - xk, py[p] - yk, Lx, Ly) <= r2 ? 1.0 : 0.0;
      sx += in * pc[p];
      sy += in * ps[p];
    }
    jx += sx;
    jy += sy;
  }

  void sums_for(const ParticleEnsemble& e, double xk, double yk, double& jx, double& jy) const {
    const double R = e.R;
    const double margin = 1e-12 * R;
    long r0 = floor_div(yk - R, hy), r1 = floor_div(yk + R, hy);
    if (r1 - r0 + 1 > static_cast<long>(nyc)) r1 = r0 + static_cast<long>(nyc) - 1;
    for (long r = r0; r <= r1; ++r) {
      const double o1 = static_cast<double>(r) * hy - yk;
      const auto [near_y, far_y] = band_range(o1, o1 + hy, e.Ly);
      if (near_y > R + margin) continue;
      const std::size_t row = wrap_index(r, nyc);
      const double w_out = std::sqrt(std::max(0.0, R * R - near_y * near_y)) + margin;
      const double w_in = far_y < R ? std::sqrt(R * R - far_y * far_y) - margin : -1.0;
      long c_lo = 0, c_hi = -1;
      if (w_in > 0.0) {
        c_lo = ceil_div(xk - w_in, hx);
        c_hi = floor_div(xk + w_in, hx) - 1;
      }
      const long o_lo = floor_div(xk - w_out, hx), o_hi = floor_div(xk + w_out, hx);
      const long span = o_hi - o_lo + 1;
      const auto n = static_cast<long>(nxc);
      if (c_hi >= c_lo) {
        add_range(row, c_lo, static_cast<std::size_t>(c_hi - c_lo + 1), jx, jy);
        if (span > n) {
          add_partial(e, row, c_hi + 1, c_lo + n - 1, xk, yk, jx, jy);
        } else {
          add_partial(e, row, o_lo, c_lo - 1, xk, yk, jx, jy);
          add_partial(e, row, c_hi + 1, o_hi, xk, yk, jx, jy);
        }
      } else {
        add_partial(e, row, o_lo, o_lo + std::min(span, n) - 1, xk, yk, jx, jy);
      }
    }
  }
};

NeighbourSums reference_sums(const ParticleEnsemble& e) {
  const CoarseCells cells(e);
  const double r2 = e.R * e.R;
  const std::size_t n = e.size();
  NeighbourSums out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  std::vector<double> cs(n), sn(n);
  for (std::size_t k = 0; k < n; ++k) {
    cs[k] = std::cos(e.theta[k]);
    sn[k] = std::sin(e.theta[k]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    double jx = 0.0, jy = 0.0;
    for (std::size_t c : cells.block(e.x[k], e.y[k])) {
      for (std::size_t p = cells.start[c]; p < cells.start[c + 1]; ++p) {
        const std::size_t j = cells.order[p];
        if (periodic_dist2(e.x[j] - e.x[k], e.y[j] - e.y[k], e.Lx, e.Ly) <= r2) {
          jx += cs[j];
          jy += sn[j];
        }
      }
    }
    out.jx[k] = jx;
    out.jy[k] = jy;
  }
  return out;
}

NeighbourSums grid_sums(const ParticleEnsemble& e) {
  const FineGrid grid(e);
  const std::size_t n = e.size();
  NeighbourSums out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const auto nl = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 256)
  for (long i = 0; i < nl; ++i) {
    // Visit particles in cell order so consecutive queries share cache lines.
    const auto p = static_cast<std::size_t>(i);
    const std::size_t k = grid.index[p];
    double jx = 0.0, jy = 0.0;
    grid.sums_for(e, grid.px[p], grid.py[p], jx, jy);
    out.jx[k] = jx;
    out.jy[k] = jy;
  }
  return out;
}

}  // namespace

void ParticleEnsemble::validate() const {
  if (!(Lx > 0.0 && Ly > 0.0)) throw Error(Errc::domain, "box lengths must be positive");
  if (!(R > 0.0) || R > 0.5 * std::min(Lx, Ly)) {
    std::ostringstream os;
    os << "interaction radius " << R << " must lie in (0, min(Lx, Ly)/2]";
    throw Error(Errc::domain, os.str());
  }
  if (!(d >= 0.0)) throw Error(Errc::domain, "noise intensity must be non-negative");
  if (!(eps > 0.0)) throw Error(Errc::domain, "eps must be positive");
  if (x.size() != theta.size() || y.size() != theta.size()) throw Error(Errc::usage, "particle arrays differ in length");
}

ParticleEnsemble make_ensemble(double Lx, double Ly, double R, double d, double eps, std::uint64_t seed) {
  ParticleEnsemble e;
  e.Lx = Lx;
  e.Ly = Ly;
  e.R = R;
  e.d = d;
  e.eps = eps;
  e.seed = seed;
  e.validate();
  return e;
}

std::vector<std::size_t> neighbours(const ParticleEnsemble& e, std::size_t k) {
  const CoarseCells cells(e);
  const double r2 = e.R * e.R;
  std::vector<std::size_t> out;
  for (std::size_t c : cells.block(e.x[k], e.y[k]))
    for (std::size_t p = cells.start[c]; p < cells.start[c + 1]; ++p) {
      const std::size_t j = cells.order[p];
      if (periodic_dist2(e.x[j] - e.x[k], e.y[j] - e.y[k], e.Lx, e.Ly) <= r2) out.push_back(j);
    }
  std::sort(out.begin(), out.end());
  return out;
}

Vec2 mean_direction(const ParticleEnsemble& e, std::size_t k) {
  double jx = 0.0, jy = 0.0;
  for (std::size_t j : neighbours(e, k)) {
    jx += std::cos(e.theta[j]);
    jy += std::sin(e.theta[j]);
  }
  const double n = std::hypot(jx, jy);
  if (n == 0.0) return {std::cos(e.theta[k]), std::sin(e.theta[k])};
  return {jx / n, jy / n};
}

NeighbourSums neighbour_sums(const ParticleEnsemble& e, Exec exec) {
  return exec == Exec::Serial ? reference_sums(e) : grid_sums(e);
}

void step_angles(ParticleEnsemble& e, double dt, const NeighbourSums& sums, bool noise) {
  const double kappa = dt / e.eps;
  const double amp = std::sqrt(2.0 * e.d * kappa);
  const std::uint64_t stream = e.step_count + 1;
  const auto nl = static_cast<long>(e.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nl; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double wx = std::cos(e.theta[k]), wy = std::sin(e.theta[k]);
    double bx = wx, by = wy;
    const double jn = std::hypot(sums.jx[k], sums.jy[k]);
    if (jn > 0.0) {
      bx += 0.5 * kappa * (sums.jx[k] / jn - wx);
      by += 0.5 * kappa * (sums.jy[k] / jn - wy);
    }
    double th = e.theta[k] + 2.0 * std::atan2(wx * by - wy * bx, wx * bx + wy * by);
    if (noise) {
      StreamRng rng(e.seed, stream, k);
      th += amp * rng.normal();
    }
    e.theta[k] = wrap_angle(th);
  }
  ++e.step_count;
}

void step_angles(ParticleEnsemble& e, double dt, Exec exec, bool noise) {
  const NeighbourSums sums = neighbour_sums(e, exec);
  step_angles(e, dt, sums, noise);
}

void step_positions(ParticleEnsemble& e, double dt) {
  const auto nl = static_cast<long>(e.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nl; ++i) {
    const auto k = static_cast<std::size_t>(i);
    e.x[k] = wrap_coord(e.x[k] + dt * std::cos(e.theta[k]), e.Lx);
    e.y[k] = wrap_coord(e.y[k] + dt * std::sin(e.theta[k]), e.Ly);
  }
}

void step(ParticleEnsemble& e, double dt, Exec exec) {
  step_angles(e, dt, exec);
  step_positions(e, dt);
}

ParticleEnsemble init_riemann(std::size_t N, const PrimState& left, const PrimState& right, double Lx, double Ly,
                              double R, double d, double eps, std::uint64_t seed) {
  if (N == 0) throw Error(Errc::domain, "need at least one particle");
  if (!(left.rho > 0.0) || !(right.rho > 0.0)) throw Error(Errc::domain, "Riemann densities must be positive");
  ParticleEnsemble e = make_ensemble(Lx, Ly, R, d, eps, seed);
  const auto n_left = static_cast<std::size_t>(std::llround(static_cast<double>(N) * left.rho / (left.rho + right.rho)));
  e.x.resize(N);
  e.y.resize(N);
  e.theta.resize(N);
  const VonMises vl(std::max(d, 1e-12), left.theta), vr(std::max(d, 1e-12), right.theta);
  for (std::size_t k = 0; k < N; ++k) {
    StreamRng rng(seed, kInitStream, k);
    const bool is_left = k < n_left;
    e.x[k] = wrap_coord((is_left ? 0.0 : 0.5 * Lx) + 0.5 * Lx * rng.uniform(), Lx);
    e.y[k] = wrap_coord(Ly * rng.uniform(), Ly);
    e.theta[k] = d > 0.0 ? (is_left ? vl : vr).sample(rng) : (is_left ? left.theta : right.theta);
  }
  e.particle_mass = 0.5 * (left.rho + right.rho) * Lx * Ly / static_cast<double>(N);
  return e;
}

ParticleEnsemble init_uniform(std::size_t N, double Lx, double Ly, double R, double d, double eps, std::uint64_t seed) {
  if (N == 0) throw Error(Errc::domain, "need at least one particle");
  ParticleEnsemble e = make_ensemble(Lx, Ly, R, d, eps, seed);
  e.x.resize(N);
  e.y.resize(N);
  e.theta.resize(N);
  for (std::size_t k = 0; k < N; ++k) {
    StreamRng rng(seed, kInitStream, k);
    e.x[k] = wrap_coord(Lx * rng.uniform(), Lx);
    e.y[k] = wrap_coord(Ly * rng.uniform(), Ly);
    e.theta[k] = wrap_angle(2.0 * std::numbers::pi * rng.uniform());
  }
  e.particle_mass = Lx * Ly / static_cast<double>(N);
  return e;
}

HeadingTrajectory run_headings(ParticleEnsemble e, double dt, double T, double snapshot_every, Exec exec) {
  if (!(dt > 0.0) || !(T >= 0.0) || !(snapshot_every > 0.0))
    throw Error(Errc::usage, "dt and snapshot interval must be positive, T non-negative");
  e.validate();
  const auto n_steps = static_cast<std::size_t>(std::llround(T / dt));
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(snapshot_every / dt)));
  HeadingTrajectory tr;
  for (std::size_t s = 0;; ++s) {
    tr.order.push_back(order_parameter(e));
    if (s % stride == 0) {
      tr.times.push_back(static_cast<double>(s) * dt);
      tr.headings.push_back(e.theta);
    }
    if (s == n_steps) break;
    step(e, dt, exec);
  }
  return tr;
}

double Profile::bin_width() const {
  if (bin_centers.size() < 2) return 0.0;
  return bin_centers[1] - bin_centers[0];
}

Profile deposit(const ParticleEnsemble& e, std::size_t nbins, std::vector<double>* mass_out) {
  if (nbins < 4) throw Error(Errc::usage, "deposition needs at least 4 bins");
  const double w = e.Lx / static_cast<double>(nbins);
  std::vector<double> m(nbins, 0.0), sc(nbins, 0.0), ss(nbins, 0.0);
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double s = e.x[k] / w - 0.5;
    const double f = std::floor(s);
    const double t = s - f;
    const std::size_t b0 = wrap_index(static_cast<long>(f), nbins);
    const std::size_t b1 = b0 + 1 == nbins ? 0 : b0 + 1;
    const double c = std::cos(e.theta[k]), sn = std::sin(e.theta[k]);
    m[b0] += 1.0 - t;
    m[b1] += t;
    sc[b0] += (1.0 - t) * c;
    ss[b0] += (1.0 - t) * sn;
    sc[b1] += t * c;
    ss[b1] += t * sn;
  }
  Profile p;
  p.bin_centers.resize(nbins);
  p.rho.resize(nbins);
  p.theta_mean.resize(nbins);
  p.circ_var.resize(nbins);
  const double scale = e.particle_mass / (w * e.Ly);
  for (std::size_t b = 0; b < nbins; ++b) {
    p.bin_centers[b] = (static_cast<double>(b) + 0.5) * w;
    p.rho[b] = m[b] * scale;
    if (m[b] > 0.0) {
      p.theta_mean[b] = std::atan2(ss[b], sc[b]);
      p.circ_var[b] = std::clamp(1.0 - std::hypot(sc[b], ss[b]) / m[b], 0.0, 1.0);
    } else {
      p.theta_mean[b] = kNaN;
      p.circ_var[b] = kNaN;
    }
  }
  if (mass_out) *mass_out = std::move(m);
  return p;
}

Profile ensemble_average(const std::vector<Profile>& runs) {
  if (runs.empty()) throw Error(Errc::usage, "no profiles to average");
  const Profile& first = runs.front();
  const std::size_t nb = first.size();
  for (const auto& r : runs) {
    if (r.size() != nb || r.rho.size() != nb || r.theta_mean.size() != nb || r.circ_var.size() != nb)
      throw Error(Errc::usage, "profiles have different binning");
    for (std::size_t b = 0; b < nb; ++b)
      if (std::abs(r.bin_centers[b] - first.bin_centers[b]) > 1e-12 * (1.0 + std::abs(first.bin_centers[b])))
        throw Error(Errc::usage, "profiles have different bin centers");
  }
  Profile out;
  out.bin_centers = first.bin_centers;
  out.rho.assign(nb, 0.0);
  out.theta_mean.assign(nb, kNaN);
  out.circ_var.assign(nb, kNaN);
  out.n_ensemble = 0;
  for (const auto& r : runs) out.n_ensemble += r.n_ensemble;
  for (std::size_t b = 0; b < nb; ++b) {
    double rho = 0.0, fx = 0.0, fy = 0.0, cv = 0.0;
    std::size_t defined = 0;
    for (const auto& r : runs) {
      rho += r.rho[b];
      if (std::isnan(r.theta_mean[b])) continue;
      const double flux = r.rho[b] * (1.0 - r.circ_var[b]);
      fx += flux * std::cos(r.theta_mean[b]);
      fy += flux * std::sin(r.theta_mean[b]);
      cv += r.circ_var[b];
      ++defined;
    }
    out.rho[b] = rho / static_cast<double>(runs.size());
    if (defined > 0) {
      out.theta_mean[b] = std::atan2(fy, fx);
      out.circ_var[b] = cv / static_cast<double>(defined);
    }
  }
  return out;
}

double order_parameter(const ParticleEnsemble& e) {
  if (e.size() == 0) throw Error(Errc::domain, "order parameter of an empty ensemble");
  double sx = 0.0, sy = 0.0;
  for (double t : e.theta) {
    sx += std::cos(t);
    sy += std::sin(t);
  }
  return std::hypot(sx, sy) / static_cast<double>(e.size());
}

MicroResult run_micro(const MicroConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.T >= 0.0)) throw Error(Errc::usage, "dt must be positive and T non-negative");
  if (cfg.ensemble == 0) throw Error(Errc::usage, "ensemble size must be at least 1");
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));
  std::size_t snap_stride = n_steps == 0 ? 1 : n_steps;
  if (cfg.snapshot_every > 0.0)
    snap_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.snapshot_every / cfg.dt)));

  std::vector<std::size_t> snap_steps;
  for (std::size_t s = 0; s <= n_steps; s += snap_stride) snap_steps.push_back(s);
  if (snap_steps.back() != n_steps) snap_steps.push_back(n_steps);

  MicroResult res;
  std::vector<std::vector<Profile>> per_snap(snap_steps.size());
  res.order_param.assign(n_steps + 1, 0.0);
  for (std::size_t m = 0; m < cfg.ensemble; ++m) {
    const std::uint64_t seed = mix64(cfg.seed ^ mix64(m + 1));
    ParticleEnsemble e = init_riemann(cfg.N, cfg.left, cfg.right, cfg.Lx, cfg.Ly, cfg.R, cfg.d, cfg.eps, seed);
    std::size_t next = 0;
    for (std::size_t s = 0;; ++s) {
      res.order_param[s] += order_parameter(e);
      if (next < snap_steps.size() && snap_steps[next] == s) per_snap[next++].push_back(deposit(e, cfg.bins));
      if (s == n_steps) break;
      step(e, cfg.dt, cfg.exec);
    }
  }
  for (std::size_t s = 0; s <= n_steps; ++s) {
    res.order_times.push_back(static_cast<double>(s) * cfg.dt);
    res.order_param[s] /= static_cast<double>(cfg.ensemble);
  }
  for (std::size_t i = 0; i < snap_steps.size(); ++i) {
    res.snapshot_times.push_back(static_cast<double>(snap_steps[i]) * cfg.dt);
    res.snapshots.push_back(ensemble_average(per_snap[i]));
  }
  return res;
}

}  // namespace vh
