#include "swapquad/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "swapquad/specfun.hpp"

namespace swapquad {

namespace {

bool boundary_is_graded(const PiecewiseBoundary& b) {
  return !b.pieces.empty() && !b.pieces.front().periodic;
}

PoleEstimate cross_pole(const PieceSamples& src, Complex x, int newton_steps) {
  PoleEstimate est = estimate_pole(src, x);
  if (!est.detectable) return est;
  try {
    est = refine_newton(*src.piece, x, est, newton_steps);
  } catch (const std::domain_error&) {
    est.converged = false;
  }
  return est;
}

// Self-interaction row of the single layer in parametric log form:
// weights w with  -(1/4pi) sum_j w_j J0(k rho_ij) |g'_j| phi_j  (+ residue for
// Helmholtz). The swapped weights with a real pole t0 = t_i reduce to Kress.
void add_slp_row(Eigen::MatrixXcd& A, int row, int col0, const PieceSamples& s,
                 Complex x, const std::vector<double>& w_log, Pde pde,
                 double kappa) {
  const std::size_t N = s.grid.nodes.size();
  for (std::size_t j = 0; j < N; ++j) {
    const double rho = std::abs(x - s.g[j]);
    if (pde == Pde::laplace) {
      A(row, col0 + j) += -w_log[j] / (4.0 * kPi) * s.absdg[j];
    } else {
      A(row, col0 + j) += -w_log[j] / (4.0 * kPi) * bessel_j(0, kappa * rho) *
                          s.absdg[j];
      A(row, col0 + j) += s.grid.weight *
                          helmholtz_slp_residue(kappa, rho) * s.absdg[j];
    }
  }
}

void add_slp_row_plain(Eigen::MatrixXcd& A, int row, int col0,
                       const PieceSamples& s, Complex x, Pde pde, double kappa) {
  const std::size_t N = s.grid.nodes.size();
  for (std::size_t j = 0; j < N; ++j) {
    const double rho = std::abs(x - s.g[j]);
    if (pde == Pde::laplace) {
      A(row, col0 + j) += -s.grid.weight * std::log(std::max(rho, 1e-300)) /
                          kTwoPi * s.absdg[j];
    } else {
      A(row, col0 + j) += s.grid.weight * 0.25 * kImag *
                          hankel1(0, kappa * rho).value * s.absdg[j];
    }
  }
}

// Double-layer rows; w_lap are the (plain or swapped) weights for the raw
// Im int g'/(x-g) phi dt integral.
void add_dlp_row(Eigen::MatrixXcd& A, int row, int col0, const PieceSamples& s,
                 Complex x, const std::vector<double>& w_lap,
                 const std::vector<double>* w_log, Pde pde, double kappa) {
  const std::size_t N = s.grid.nodes.size();
  for (std::size_t j = 0; j < N; ++j) {
    A(row, col0 + j) += w_lap[j] / kTwoPi;
    if (pde == Pde::helmholtz) {
      const Complex diff = x - s.g[j];
      const double rho = std::abs(diff);
      const double bds = (s.dg[j] * std::conj(diff)).imag();
      if (w_log != nullptr) {
        A(row, col0 + j) += -kappa * kappa / (4.0 * kPi) * (*w_log)[j] *
                            bessel_j1_over_x(kappa * rho) * bds;
        A(row, col0 + j) += s.grid.weight * bds *
                            helmholtz_dlp_residue_over_rho(kappa, rho);
      } else {
        // plain full kernel, Laplace part already added above; remove it and
        // add the full Hankel kernel instead
        A(row, col0 + j) -= w_lap[j] / kTwoPi;
        A(row, col0 + j) += s.grid.weight * 0.25 * kImag * kappa *
                            hankel1(1, kappa * rho).value * (bds / rho);
      }
    }
  }
}

// Smooth on-surface double-layer kernel rows (the kernel is continuous along
// the piece; diagonal is the curvature limit).
std::vector<double> dlp_self_weights(const PieceSamples& s, std::size_t i) {
  const std::size_t N = s.grid.nodes.size();
  std::vector<double> w(N);
  const Complex x = s.g[i];
  for (std::size_t j = 0; j < N; ++j) {
    if (j == i) {
      w[j] = -s.grid.weight *
             (s.piece->deriv2(s.grid.nodes[i]) / (2.0 * s.dg[i])).imag();
    } else {
      w[j] = s.grid.weight * (s.dg[j] / (x - s.g[j])).imag();
    }
  }
  return w;
}

}  // namespace

NystromSystem assemble(const BIEProblem& problem) {
  const auto& pieces = problem.boundary.pieces;
  if (pieces.empty()) throw std::invalid_argument("empty boundary");
  if (problem.n < 8) throw std::invalid_argument("per-piece order n must be >= 8");
  PotentialSpec spec{problem.pde, problem.kappa, problem.representation,
                     Strategy::swapped};
  spec.validate();

  NystromSystem sys;
  sys.n = problem.n;
  const int P = static_cast<int>(pieces.size());
  const int N = 2 * problem.n;
  const int total = P * N;
  sys.matrix = Eigen::MatrixXcd::Zero(total, total);
  sys.rhs = Eigen::VectorXcd::Zero(total);
  sys.corner_row.assign(total, false);
  sys.samples.reserve(P);
  for (int p = 0; p < P; ++p) sys.samples.push_back(sample_piece(pieces[p], problem.n));

  const bool graded = boundary_is_graded(problem.boundary);
  const double jump = problem.interior ? -0.5 : 0.5;

  for (int p = 0; p < P; ++p) {
    const PieceSamples& tgt = sys.samples[p];
    for (int i = 0; i < N; ++i) {
      const int row = p * N + i;
      if (graded && i == 0) {
        // joint node: transformed density vanishes there; pin it
        sys.matrix(row, row) = 1.0;
        sys.rhs(row) = 0.0;
        sys.corner_row[row] = true;
        continue;
      }
      const Complex x = tgt.g[i];
      sys.rhs(row) = problem.dirichlet_data(x);
      if (problem.representation == Layer::double_layer) {
        sys.matrix(row, row) += jump;
      }
      for (int q = 0; q < P; ++q) {
        const PieceSamples& src = sys.samples[q];
        const int col0 = q * N;
        if (q == p) {
          if (problem.representation == Layer::single) {
            const auto w_log = slp_log_weights(src, x, Complex(tgt.grid.nodes[i], 0.0));
            add_slp_row(sys.matrix, row, col0, src, x, w_log, problem.pde,
                        problem.kappa);
          } else {
            const auto w_lap = dlp_self_weights(src, static_cast<std::size_t>(i));
            const auto w_log = slp_log_weights(src, x, Complex(tgt.grid.nodes[i], 0.0));
            add_dlp_row(sys.matrix, row, col0, src, x, w_lap, &w_log,
                        problem.pde, problem.kappa);
          }
          continue;
        }
        const PoleEstimate pole = cross_pole(src, x, 3);
        const bool plain = !pole.converged || is_far(pole);
        if (problem.representation == Layer::single) {
          if (plain) {
            add_slp_row_plain(sys.matrix, row, col0, src, x, problem.pde,
                              problem.kappa);
          } else {
            const auto w_log = slp_log_weights(src, x, pole.t0);
            add_slp_row(sys.matrix, row, col0, src, x, w_log, problem.pde,
                        problem.kappa);
          }
        } else {
          if (plain) {
            const auto w_lap = dlp_weights_plain(src, x);
            add_dlp_row(sys.matrix, row, col0, src, x, w_lap, nullptr,
                        problem.pde, problem.kappa);
          } else {
            const auto w_lap = dlp_swapped_weights(src, x, pole.t0);
            const auto w_log = slp_log_weights(src, x, pole.t0);
            add_dlp_row(sys.matrix, row, col0, src, x, w_lap, &w_log,
                        problem.pde, problem.kappa);
          }
        }
      }
    }
  }
  return sys;
}

SolvedDensity solve(const NystromSystem& system) {
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system.matrix);
  const Eigen::VectorXcd phi = lu.solve(system.rhs);
  SolvedDensity out;
  out.rcond = lu.rcond();
  if (out.rcond < 1e-14) {
    throw std::runtime_error("Nystrom system numerically singular");
  }
  if (out.rcond < 1e-10) {
    std::cerr << "[swapquad] warning: condition estimate "
              << 1.0 / out.rcond << "\n";
  }
  const double rhs_norm = system.rhs.norm();
  out.residual = rhs_norm > 0.0
                     ? (system.matrix * phi - system.rhs).norm() / rhs_norm
                     : 0.0;
  const int P = static_cast<int>(system.samples.size());
  const int N = 2 * system.n;
  out.per_piece.resize(P);
  for (int p = 0; p < P; ++p) {
    out.per_piece[p].samples.assign(phi.data() + p * N, phi.data() + (p + 1) * N);
    out.per_piece[p].premultiplied = false;
  }
  return out;
}

namespace {

struct TargetContext {
  const BIEProblem* problem;
  const NystromSystem* system;
  const SolvedDensity* density;
  const FieldOptions* options;
};

TargetReport evaluate_one(const TargetContext& ctx, Complex x) {
  const BIEProblem& prob = *ctx.problem;
  const NystromSystem& sys = *ctx.system;
  const FieldOptions& opt = *ctx.options;
  const int P = static_cast<int>(sys.samples.size());
  const int N = 2 * sys.n;
  TargetReport rep;

  // on-surface detection
  double min_node_dist = std::numeric_limits<double>::infinity();
  for (const auto& s : sys.samples) {
    for (const Complex& g : s.g) min_node_dist = std::min(min_node_dist, std::abs(x - g));
  }
  const double scale = sys.samples.front().piece->scale;
  rep.on_surface = min_node_dist < 1e-12 * scale;

  // per-piece poles
  std::vector<PoleEstimate> poles(P);
  double min_im = std::numeric_limits<double>::infinity();
  for (int p = 0; p < P; ++p) {
    if (rep.on_surface) break;
    poles[p] = cross_pole(sys.samples[p], x, std::max(1, opt.newton_steps));
    if (poles[p].converged && std::abs(poles[p].t0.imag()) < min_im) {
      min_im = std::abs(poles[p].t0.imag());
      rep.nearest_piece = p;
      rep.pole_t0 = poles[p].t0;
    }
  }

  // side classification: trust the nearest pole close to the boundary,
  // the winding test otherwise
  if (rep.nearest_piece >= 0 && min_im < 0.1) {
    rep.inside = poles[rep.nearest_piece].t0.imag() > 0.0;
  } else {
    rep.inside = prob.boundary.contains(x);
  }
  const Location loc = rep.inside ? Location::inside : Location::outside;

  if (rep.on_surface) {
    // evaluate by the on-surface limit at the nearest node (principal value
    // for the double layer)
    int bp = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int p = 0; p < P; ++p) {
      for (int j = 0; j < N; ++j) {
        const double d = std::abs(x - sys.samples[p].g[j]);
        if (d < best) {
          best = d;
          bp = p;
          bj = j;
        }
      }
    }
    Complex acc = 0.0;
    for (int q = 0; q < P; ++q) {
      const PieceSamples& src = sys.samples[q];
      const DensityGrid& phi = ctx.density->per_piece[q];
      const Complex xs = sys.samples[bp].g[bj];
      if (prob.representation == Layer::single) {
        if (q == bp) {
          const auto w = slp_log_weights(src, xs, Complex(src.grid.nodes[bj], 0.0));
          for (int j = 0; j < N; ++j) {
            if (prob.pde == Pde::laplace) {
              acc += -w[j] / (4.0 * kPi) * src.absdg[j] * phi.samples[j];
            } else {
              const double rho = std::abs(xs - src.g[j]);
              acc += (-w[j] / (4.0 * kPi) * bessel_j(0, prob.kappa * rho) +
                      src.grid.weight * helmholtz_slp_residue(prob.kappa, rho)) *
                     src.absdg[j] * phi.samples[j];
            }
          }
        } else {
          const PoleEstimate pole = cross_pole(src, xs, 3);
          acc += prob.pde == Pde::laplace
                     ? Complex(-laplace_slp_close(src, phi, xs, pole) / (4.0 * kPi))
                     : helmholtz_slp_close(src, phi, xs, prob.kappa, pole);
        }
      } else {
        // principal-value double layer
        if (q == bp) {
          const auto w = dlp_self_weights(src, static_cast<std::size_t>(bj));
          for (int j = 0; j < N; ++j) acc += w[j] / kTwoPi * phi.samples[j];
          if (prob.pde == Pde::helmholtz) {
            const auto w_log = slp_log_weights(src, xs, Complex(src.grid.nodes[bj], 0.0));
            for (int j = 0; j < N; ++j) {
              const Complex diff = xs - src.g[j];
              const double rho = std::abs(diff);
              const double bds = (src.dg[j] * std::conj(diff)).imag();
              acc += (-prob.kappa * prob.kappa / (4.0 * kPi) * w_log[j] *
                          bessel_j1_over_x(prob.kappa * rho) * bds +
                      src.grid.weight * bds *
                          helmholtz_dlp_residue_over_rho(prob.kappa, rho)) *
                     phi.samples[j];
            }
          }
        } else {
          const PoleEstimate pole = cross_pole(src, xs, 3);
          acc += prob.pde == Pde::laplace
                     ? Complex(laplace_dlp_close(src, phi, xs, pole, false, loc) / kTwoPi)
                     : helmholtz_dlp_close(src, phi, xs, prob.kappa, pole, false, loc);
        }
      }
    }
    rep.value = acc;
    rep.used = Strategy::swapped;
    return rep;
  }

  // near-node trigger for the subtraction technique
  bool near_node = false;
  if (rep.nearest_piece >= 0) {
    const PoleEstimate& pe = poles[rep.nearest_piece];
    const double spacing = kPi / sys.n;
    const double dre = std::remainder(pe.t0.real(), spacing);
    near_node = std::abs(dre) < 0.2 * spacing || std::abs(pe.t0.imag()) < 0.2 * spacing;
  }
  rep.near_node = near_node;

  const bool want_swap = opt.strategy != Strategy::plain;
  const bool want_sub =
      prob.representation == Layer::double_layer && want_swap &&
      (opt.strategy == Strategy::swapped_subtraction ||
       (opt.auto_subtraction && near_node));

  // density shift for the subtraction technique
  Complex shift = 0.0;
  if (want_sub && rep.nearest_piece >= 0) {
    const PieceSamples& s = sys.samples[rep.nearest_piece];
    const double spacing = s.grid.weight;
    int j = static_cast<int>(std::lround(rep.pole_t0.real() / spacing)) % N;
    if (j < 0) j += N;
    if (!s.piece->periodic && j == 0) j = 1;  // joint sample is pinned to zero
    shift = ctx.density->per_piece[rep.nearest_piece].samples[j];
  }

  Complex acc = 0.0;
  if (want_sub) acc += mu_value(loc) * shift / kTwoPi;

  double min_im_used = std::numeric_limits<double>::infinity();
  for (int q = 0; q < P; ++q) {
    const PieceSamples& src = sys.samples[q];
    const DensityGrid& phi = ctx.density->per_piece[q];
    const PoleEstimate& pole = poles[q];
    const bool plain_piece = !want_swap || !pole.converged || is_far(pole);
    if (!plain_piece) min_im_used = std::min(min_im_used, std::abs(pole.t0.imag()));

    PoleEstimate use_pole = pole;
    if (!want_swap) use_pole.converged = false;  // force plain path

    if (prob.representation == Layer::single) {
      if (prob.pde == Pde::laplace) {
        acc += -laplace_slp_close(src, phi, x, use_pole) / (4.0 * kPi);
      } else {
        acc += helmholtz_slp_close(src, phi, x, prob.kappa, use_pole);
      }
    } else {
      if (prob.pde == Pde::laplace) {
        DensityGrid work = phi;
        if (want_sub) {
          for (Complex& v : work.samples) v -= shift;
        }
        acc += laplace_dlp_close(src, work, x, use_pole, false, loc) / kTwoPi;
      } else {
        acc += helmholtz_dlp_eval(src, phi, x, prob.kappa, use_pole,
                                  want_sub ? shift : Complex(0.0));
      }
    }
  }
  rep.value = acc;
  rep.used = !want_swap ? Strategy::plain
             : want_sub ? Strategy::swapped_subtraction
                        : Strategy::swapped;

  ConvergenceModel model;
  model.im_t0 = std::isfinite(min_im_used) ? min_im_used : far_cutoff(sys.n);
  double est = model.modified_rate(sys.n);
  if (boundary_is_graded(prob.boundary) && !prob.boundary.alphas.empty()) {
    ConvergenceModel corner;
    corner.alpha = *std::min_element(prob.boundary.alphas.begin(),
                                     prob.boundary.alphas.end());
    corner.grading_order = 7;
    est = std::max(est, 1e-3 * corner.corner_rate(sys.n));
  }
  rep.est_error = est;
  return rep;
}

}  // namespace

std::vector<TargetReport> evaluate_field(const BIEProblem& problem,
                                         const NystromSystem& system,
                                         const SolvedDensity& density,
                                         std::span<const Complex> targets,
                                         const FieldOptions& options) {
  std::vector<TargetReport> out(targets.size());
  TargetContext ctx{&problem, &system, &density, &options};
  const int threads = std::max(1, options.threads);
  if (threads == 1 || targets.size() < 16) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      out[i] = evaluate_one(ctx, targets[i]);
    }
    return out;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (targets.size() + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(targets.size(), lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = evaluate_one(ctx, targets[i]);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

CornerProfile corner_density_profile(const NystromSystem& system,
                                     const SolvedDensity& density, int joint,
                                     bool subtract_limit, double r_min,
                                     double r_max) {
  const int P = static_cast<int>(system.samples.size());
  if (joint < 0 || joint >= P) throw std::invalid_argument("bad joint index");
  const PieceSamples& s = system.samples[joint];
  const int N = static_cast<int>(s.grid.nodes.size());

  // cumulative arc length from the joint along the piece
  constexpr int kFine = 4096;
  std::vector<double> arc(N, 0.0);
  {
    double acc = 0.0;
    int next = 1;
    for (int k = 0; k < kFine && next < N; ++k) {
      const double t0 = kTwoPi * k / kFine;
      const double t1 = kTwoPi * (k + 1) / kFine;
      acc += 0.5 * (std::abs(s.piece->deriv(t0)) + std::abs(s.piece->deriv(t1))) *
             (t1 - t0);
      while (next < N && s.grid.nodes[next] <= t1 + 1e-12) {
        arc[next] = acc;
        ++next;
      }
    }
  }

  const auto& phi = density.per_piece[joint].samples;
  Complex limit = 0.0;
  if (subtract_limit) limit = phi[1];  // node nearest the corner

  CornerProfile prof;
  for (int j = 1; j < N / 2; ++j) {
    const double r = arc[j];
    const double v = std::abs(phi[j] - limit);
    prof.samples.emplace_back(r, v);
  }
  // least-squares slope of log|phi| vs log r in the window
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& [r, v] : prof.samples) {
    if (r < r_min || r > r_max || v <= 0.0) continue;
    const double lx = std::log(r), ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m >= 5) {
    prof.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    prof.fit_ok = true;
  }
  return prof;
}

}  // namespace swapquad
