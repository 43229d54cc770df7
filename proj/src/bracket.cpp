#include "qlc/bracket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "qlc/rng.hpp"

namespace qlc {

BracketSpec make_test_bracket(double eps_b, double epsilon0, std::size_t dim) {
  BracketSpec spec;
  spec.eps_b = eps_b;
  spec.epsilon0 = epsilon0;
  spec.dim = dim;
  spec.antisymmetric = true;
  spec.evaluator = [eps_b](const HVector& x, const HVector& y, double) {
    if (x.size() != y.size()) throw dimension_error("bracket size mismatch");
    HVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = eps_b * (qmul(qconj(x[i]), y[i]) - qmul(qconj(y[i]), x[i]));
    }
    return out;
  };
  return spec;
}

BracketSpec make_zero_bracket(double epsilon0, std::size_t dim) {
  BracketSpec spec;
  spec.epsilon0 = epsilon0;
  spec.dim = dim;
  spec.antisymmetric = true;
  spec.evaluator = [dim](const HVector&, const HVector&, double) {
    return HVector(dim);
  };
  return spec;
}

BracketSpec make_commutator_bracket(double epsilon0, std::size_t dim) {
  BracketSpec spec;
  spec.epsilon0 = epsilon0;
  spec.dim = dim;
  spec.antisymmetric = true;
  spec.evaluator = [](const HVector& x, const HVector& y, double) {
    if (x.size() != y.size()) throw dimension_error("bracket size mismatch");
    HVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = qmul(x[i], y[i]) - qmul(y[i], x[i]);
    }
    return out;
  };
  return spec;
}

BracketSpec make_second_coordinate_bracket(double eps_b, double epsilon0) {
  BracketSpec spec;
  spec.eps_b = eps_b;
  spec.epsilon0 = epsilon0;
  spec.dim = 2;
  spec.antisymmetric = true;
  spec.evaluator = [eps_b](const HVector& x, const HVector& y, double) {
    if (x.size() != 2 || y.size() != 2) {
      throw dimension_error("bracket expects two components");
    }
    HVector out(2);
    out[1] = eps_b * (qmul(qconj(x[1]), y[1]) - qmul(qconj(y[1]), x[1]));
    return out;
  };
  return spec;
}

HVector eval_bracket(const BracketSpec& spec, const HVector& x, const HVector& y,
                     double t) {
  return spec.evaluator(x, y, t);
}

HVector jacobiator(const BracketSpec& spec, const HVector& x, const HVector& y,
                   const HVector& z, double t) {
  HVector a = spec.evaluator(x, spec.evaluator(y, z, t), t);
  HVector b = spec.evaluator(y, spec.evaluator(z, x, t), t);
  HVector c = spec.evaluator(z, spec.evaluator(x, y, t), t);
  return a + b + c;
}

namespace {

struct BestSample {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

/* argmax over sample indices; the tie break (larger value, then smaller
 * index) keeps the result independent of the worker count */
template <typename Eval>
BestSample parallel_argmax(std::size_t samples, int workers, const Eval& eval) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(samples, 1)));

  std::vector<BestSample> partial(workers);
  auto run = [&](int w) {
    BestSample best;
    for (std::size_t i = w; i < samples; i += workers) {
      double v = eval(i);
      if (v > best.value || (v == best.value && i < best.index)) {
        best.value = v;
        best.index = i;
      }
    }
    partial[w] = best;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  BestSample best;
  for (const auto& p : partial) {
    if (p.value > best.value || (p.value == best.value && p.index < best.index)) {
      best = p;
    }
  }
  return best;
}

double* quat_component(Quaternion& q, int c) {
  switch (c) {
    case 0: return &q.w;
    case 1: return &q.x;
    case 2: return &q.y;
    default: return c == 3 ? &q.z : nullptr;
  }
}

/* coordinate-wise ascent on a tuple of unit-sphere arguments; each accepted
 * move renormalizes the touched argument, the step shrinks after a pass
 * without improvement */
template <typename Objective>
double hill_climb_units(std::vector<HVector>& args, const Objective& f, int steps) {
  double best = f(args);
  double step = 0.1;
  for (int pass = 0; pass < steps; ++pass) {
    bool improved = false;
    for (std::size_t a = 0; a < args.size(); ++a) {
      for (std::size_t e = 0; e < args[a].size(); ++e) {
        for (int comp = 0; comp < 4; ++comp) {
          const HVector saved = args[a];
          bool accepted = false;
          for (double delta : {step, -step}) {
            args[a] = saved;
            *quat_component(args[a][e], comp) += delta;
            double n = hnorm(args[a]);
            if (n <= 1e-12) continue;
            args[a] = args[a] * (1.0 / n);
            double v = f(args);
            if (v > best) {
              best = v;
              improved = true;
              accepted = true;
              break;
            }
          }
          if (!accepted) args[a] = saved;
        }
      }
    }
    if (!improved) step *= 0.7;
  }
  return best;
}

}  // namespace

double estimate_A(const BracketSpec& spec, std::size_t samples, std::uint64_t seed,
                  int workers) {
  auto ratio = [&](const std::vector<HVector>& args) {
    return hnorm(spec.evaluator(args[0], args[1], 0.0));
  };
  auto eval = [&](std::size_t i) {
    CounterRng rng = CounterRng::for_sample(seed, i);
    std::vector<HVector> args = {rng.unit_hvector(spec.dim),
                                 rng.unit_hvector(spec.dim)};
    return ratio(args);
  };
  BestSample best = parallel_argmax(samples, workers, eval);
  CounterRng rng = CounterRng::for_sample(seed, best.index);
  std::vector<HVector> args = {rng.unit_hvector(spec.dim),
                               rng.unit_hvector(spec.dim)};
  return hill_climb_units(args, ratio, 100);
}

double estimate_C2(const BracketSpec& spec, std::size_t samples, std::uint64_t seed,
                   int workers) {
  auto ratio = [&](const std::vector<HVector>& args) {
    return hnorm(jacobiator(spec, args[0], args[1], args[2], 0.0));
  };
  auto eval = [&](std::size_t i) {
    CounterRng rng = CounterRng::for_sample(seed, i);
    std::vector<HVector> args = {rng.unit_hvector(spec.dim),
                                 rng.unit_hvector(spec.dim),
                                 rng.unit_hvector(spec.dim)};
    return ratio(args);
  };
  BestSample best = parallel_argmax(samples, workers, eval);
  CounterRng rng = CounterRng::for_sample(seed, best.index);
  std::vector<HVector> args = {rng.unit_hvector(spec.dim),
                               rng.unit_hvector(spec.dim),
                               rng.unit_hvector(spec.dim)};
  return hill_climb_units(args, ratio, 100) / 6.0;
}

double estimate_C1(const BracketSpec& spec, std::size_t samples, std::uint64_t seed,
                   int workers) {
  if (spec.antisymmetric) return 0.0;
  auto ratio = [&](const std::vector<HVector>& args) {
    HVector sym = spec.evaluator(args[0], args[1], 0.0) +
                  spec.evaluator(args[1], args[0], 0.0);
    return hnorm(sym) / 2.0;
  };
  auto eval = [&](std::size_t i) {
    CounterRng rng = CounterRng::for_sample(seed, i);
    std::vector<HVector> args = {rng.unit_hvector(spec.dim),
                                 rng.unit_hvector(spec.dim)};
    return ratio(args);
  };
  BestSample best = parallel_argmax(samples, workers, eval);
  CounterRng rng = CounterRng::for_sample(seed, best.index);
  std::vector<HVector> args = {rng.unit_hvector(spec.dim),
                               rng.unit_hvector(spec.dim)};
  return hill_climb_units(args, ratio, 100);
}

double admissible_radius(double A, double C1, double C2, double eps0,
                         bool antisymmetric) {
  const double inf = std::numeric_limits<double>::infinity();
  double r = eps0;
  if (antisymmetric) {
    r = std::min(r, A > 0.0 ? 1.0 / (8.0 * A) : inf);
  } else {
    r = std::min(r, A > 0.0 ? 1.0 / (16.0 * A) : inf);
    r = std::min(r, C1 > 0.0 ? std::sqrt(1.0 / (16.0 * C1)) : inf);
  }
  r = std::min(r, C2 > 0.0 ? 1.0 / (4.0 * C2) : inf);
  return r;
}

BracketConstants bracket_constants(double A, double C1, double C2, double eps0) {
  BracketConstants out;
  out.A = A;
  out.C1 = C1;
  out.C2 = C2;
  out.eps_star_generic = admissible_radius(A, C1, C2, eps0, false);
  out.eps_star_antisym = admissible_radius(A, C1, C2, eps0, true);
  return out;
}

}  // namespace qlc
