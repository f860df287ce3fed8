#include "swr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace swr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Evaluator {
 public:
  Evaluator(const OptProblem& problem, long budget)
      : problem_(problem), remaining_(budget) {}

  void clip(std::vector<double>& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::min(std::max(x[i], problem_.lower_bounds[i]), problem_.upper_bounds[i]);
    }
  }

  // Clips in place, evaluates, and keeps the running best.
  double eval(std::vector<double>& x) {
    clip(x);
    --remaining_;
    ++used_;
    double f = problem_.objective(x);
    if (std::isnan(f)) f = kInf;
    if (f < best_f_) {
      best_f_ = f;
      best_x_ = x;
    }
    return f;
  }

  bool exhausted() const { return remaining_ <= 0; }
  long used() const { return used_; }
  double best_f() const { return best_f_; }
  const std::vector<double>& best_x() const { return best_x_; }

 private:
  const OptProblem& problem_;
  long remaining_;
  long used_ = 0;
  double best_f_ = kInf;
  std::vector<double> best_x_;
};

struct Vertex {
  std::vector<double> x;
  double f = kInf;
};

// One simplex run from `center` with per-coordinate steps `h`. Stops when the
// simplex function values agree to ftol, the iteration cap is hit, or the
// budget runs out.
void simplex_round(Evaluator& ev, const std::vector<double>& center,
                   const std::vector<double>& h, double ftol) {
  const std::size_t n = center.size();
  const double nd = static_cast<double>(n);
  // dimension-adaptive coefficients (plain Nelder-Mead values for n == 1)
  const double refl = 1.0;
  const double expa = n >= 2 ? 1.0 + 2.0 / nd : 2.0;
  const double contr = n >= 2 ? 0.75 - 0.5 / nd : 0.5;
  const double shrink = n >= 2 ? 1.0 - 1.0 / nd : 0.5;

  std::vector<Vertex> simplex(n + 1);
  simplex[0].x = center;
  simplex[0].f = ev.eval(simplex[0].x);
  for (std::size_t i = 0; i < n && !ev.exhausted(); ++i) {
    simplex[i + 1].x = center;
    simplex[i + 1].x[i] += h[i];
    simplex[i + 1].f = ev.eval(simplex[i + 1].x);
  }
  if (ev.exhausted()) return;

  const long max_iter = static_cast<long>(250 * n);
  std::vector<double> centroid(n), trial(n);

  for (long iter = 0; iter < max_iter && !ev.exhausted(); ++iter) {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    if (simplex.back().f - simplex.front().f < ftol) return;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i].x[j];
    }
    for (double& c : centroid) c /= nd;

    Vertex& worst = simplex.back();
    const double f_best = simplex.front().f;
    const double f_second = simplex[n - 1].f;

    for (std::size_t j = 0; j < n; ++j) {
      trial[j] = centroid[j] + refl * (centroid[j] - worst.x[j]);
    }
    std::vector<double> reflected = trial;
    const double f_refl = ev.eval(reflected);

    if (f_refl < f_best) {
      if (!ev.exhausted()) {
        for (std::size_t j = 0; j < n; ++j) {
          trial[j] = centroid[j] + expa * (centroid[j] - worst.x[j]);
        }
        std::vector<double> expanded = trial;
        const double f_exp = ev.eval(expanded);
        if (f_exp < f_refl) {
          worst = {std::move(expanded), f_exp};
          continue;
        }
      }
      worst = {std::move(reflected), f_refl};
      continue;
    }
    if (f_refl < f_second) {
      worst = {std::move(reflected), f_refl};
      continue;
    }
    if (ev.exhausted()) return;

    bool contracted = false;
    if (f_refl < worst.f) {
      // outside contraction
      for (std::size_t j = 0; j < n; ++j) {
        trial[j] = centroid[j] + contr * (reflected[j] - centroid[j]);
      }
      std::vector<double> point = trial;
      const double f_c = ev.eval(point);
      if (f_c <= f_refl) {
        worst = {std::move(point), f_c};
        contracted = true;
      }
    } else {
      // inside contraction
      for (std::size_t j = 0; j < n; ++j) {
        trial[j] = centroid[j] - contr * (centroid[j] - worst.x[j]);
      }
      std::vector<double> point = trial;
      const double f_c = ev.eval(point);
      if (f_c < worst.f) {
        worst = {std::move(point), f_c};
        contracted = true;
      }
    }
    if (contracted) continue;

    // shrink toward the best vertex
    for (std::size_t i = 1; i <= n && !ev.exhausted(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        simplex[i].x[j] =
            simplex[0].x[j] + shrink * (simplex[i].x[j] - simplex[0].x[j]);
      }
      simplex[i].f = ev.eval(simplex[i].x);
    }
  }
}

}  // namespace

MinimizeResult minimize(const OptProblem& problem, std::vector<double> x0) {
  if (problem.dim == 0) throw std::invalid_argument("minimize: dim must be positive");
  if (!problem.objective) throw std::invalid_argument("minimize: missing objective");
  if (x0.size() != problem.dim) {
    throw std::invalid_argument("minimize: start point has wrong dimension");
  }
  if (!(problem.ftol_abs > 0.0)) {
    throw std::invalid_argument("minimize: ftol_abs must be positive");
  }

  OptProblem p = problem;
  if (p.lower_bounds.empty()) p.lower_bounds.assign(p.dim, 0.0);
  if (p.upper_bounds.empty()) p.upper_bounds.assign(p.dim, kInf);
  if (p.lower_bounds.size() != p.dim || p.upper_bounds.size() != p.dim) {
    throw std::invalid_argument("minimize: bounds have wrong dimension");
  }
  for (std::size_t i = 0; i < p.dim; ++i) {
    if (!(p.lower_bounds[i] <= p.upper_bounds[i])) {
      throw std::invalid_argument("minimize: lower bound exceeds upper bound");
    }
  }
  const long budget = p.max_evals > 0 ? p.max_evals : 5000 * static_cast<long>(p.dim);

  Evaluator ev(p, budget);
  std::vector<double> start = std::move(x0);
  const double f0 = ev.eval(start);
  if (!std::isfinite(f0)) {
    throw std::invalid_argument("minimize: objective not finite at the start point");
  }

  // Restart ladder: fresh simplexes around the incumbent, full scale after
  // every improvement (escape shrunk simplexes), halved scale after a stall
  // (resolve narrow valleys between the support-change kinks). Converged
  // means every scale down to 2^-10 stalled in turn.
  MinimizeResult result;
  std::vector<double> h(p.dim);
  const int max_rounds = 400;
  double scale = 1.0;
  for (int round = 0; round < max_rounds && !ev.exhausted(); ++round) {
    const std::vector<double> center = ev.best_x();
    const double f_before = ev.best_f();
    for (std::size_t i = 0; i < p.dim; ++i) {
      h[i] = scale * std::max(0.5, 0.25 * std::abs(center[i]));
      // step into the interior when sitting on the upper bound
      if (center[i] + h[i] > p.upper_bounds[i]) h[i] = -h[i];
    }
    simplex_round(ev, center, h, p.ftol_abs);
    if (f_before - ev.best_f() < p.ftol_abs) {
      scale *= 0.5;
      if (scale < 1.0 / 1024.0) {
        result.converged = true;
        break;
      }
    } else {
      scale = 1.0;
    }
  }

  result.x = ev.best_x();
  result.f = ev.best_f();
  result.n_evals = ev.used();
  return result;
}

}  // namespace swr
