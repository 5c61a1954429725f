#include "rwppt/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "rwppt/error.hpp"
#include "rwppt/pt_engine.hpp"
#include "rwppt/theory.hpp"

namespace rwppt {

void MomentAccumulator::add(double x) noexcept {
  MomentAccumulator single;
  single.n_ = 1;
  single.mean_ = x;
  merge(single);
}

void MomentAccumulator::merge(const MomentAccumulator& o) noexcept {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double delta = o.mean_ - mean_;
  const double d2 = delta * delta;
  const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
  const double m3 = m3_ + o.m3_ + d2 * delta * na * nb * (na - nb) / (n * n) +
                    3.0 * delta * (na * o.m2_ - nb * m2_) / n;
  const double m4 = m4_ + o.m4_ +
                    d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * delta * (na * o.m3_ - nb * m3_) / n;
  mean_ += delta * nb / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += o.n_;
}

double MomentAccumulator::variance() const noexcept {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double MomentAccumulator::mean_stderr() const noexcept {
  return n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double MomentAccumulator::variance_stderr() const noexcept {
  if (n_ < 4) return 0.0;
  const double n = static_cast<double>(n_);
  const double mu2 = m2_ / n;
  const double mu4 = m4_ / n;
  const double v = (mu4 - mu2 * mu2 * (n - 3.0) / (n - 1.0)) / n;
  return std::sqrt(std::max(v, 0.0));
}

namespace {

struct PairSetup {
  double beta_hi;
  TemperedLevel lo, hi;
  StationarySampler lo_sampler, hi_sampler;
};

double upper_beta(double beta, double ell, std::size_t d) {
  if (!(beta >= kMinBeta && beta <= 1.0)) {
    throw ArgumentError("inverse temperature must lie in [1e-6, 1]");
  }
  if (!(ell >= 0.0) || !std::isfinite(ell)) throw ArgumentError("spacing ell must be >= 0");
  double hi = beta + ell / std::sqrt(static_cast<double>(d));
  if (hi > 1.0 + 1e-12) {
    throw ArgumentError("inadmissible pair: beta + ell / sqrt(d) = " + std::to_string(hi) +
                        " exceeds 1");
  }
  return std::min(hi, 1.0);
}

// Runs per-batch work in parallel and returns the per-batch results in batch order.
template <class Result, class Work>
std::vector<Result> run_batches(std::uint64_t n_samples, const EstimatorOptions& opts,
                                Work&& work) {
  const std::size_t batch = std::max<std::size_t>(opts.batch_size, 1);
  const std::size_t n_batches = static_cast<std::size_t>((n_samples + batch - 1) / batch);
  std::vector<Result> results(n_batches);
  auto worker = [&](std::size_t first, std::size_t stride) {
    for (std::size_t b = first; b < n_batches; b += stride) {
      const std::uint64_t begin = static_cast<std::uint64_t>(b) * batch;
      const std::uint64_t count = std::min<std::uint64_t>(batch, n_samples - begin);
      results[b] = work(b, count);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, n_batches));
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
  }
  return results;
}

template <class Visit>
void draw_pairs(const PairSetup& s, std::size_t d, std::uint64_t count, Rng& rng, Visit&& visit) {
  std::vector<double> x(d), y(d);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t j = s.lo_sampler.sample_into(rng, x);
    const std::size_t m = s.hi_sampler.sample_into(rng, y);
    visit(j, m, x, y);
  }
}

void check_samples(std::uint64_t n_samples) {
  if (n_samples < 1000) throw ArgumentError("n_samples must be at least 1000");
}

}  // namespace

EstimateWithError estimate_acceptance(const TargetModel& model, double beta, double ell,
                                      std::uint64_t n_samples, Seed seed,
                                      const EstimatorOptions& opts) {
  check_samples(n_samples);
  const std::size_t d = model.dimension();
  const double beta_hi = upper_beta(beta, ell, d);
  MomentAccumulator total;
  if (beta_hi == beta) {
    // l = 0: B vanishes identically.
    for (std::uint64_t i = 0; i < n_samples; ++i) total.add(1.0);
  } else {
    const PairSetup setup{beta_hi, TemperedLevel(model, beta), TemperedLevel(model, beta_hi),
                          StationarySampler(model, beta), StationarySampler(model, beta_hi)};
    const auto parts = run_batches<MomentAccumulator>(
        n_samples, opts, [&](std::size_t b, std::uint64_t count) {
          Rng rng(seed.child(b));
          MomentAccumulator acc;
          draw_pairs(setup, d, count, rng,
                     [&](std::size_t, std::size_t, const std::vector<double>& x,
                         const std::vector<double>& y) {
                       const double B = log_swap_ratio(setup.lo, setup.hi, x, y);
                       acc.add(B >= 0.0 ? 1.0 : std::exp(B));
                     });
          return acc;
        });
    for (const auto& p : parts) total.merge(p);
  }
  return {total.mean(), total.mean_stderr(), total.count()};
}

EsjdEstimate estimate_esjd(const TargetModel& model, double beta, double ell,
                           std::uint64_t n_samples, Seed seed, const EstimatorOptions& opts) {
  const EstimateWithError a = estimate_acceptance(model, beta, ell, n_samples, seed, opts);
  const double d = static_cast<double>(model.dimension());
  const double eps2 = ell * ell / d;
  EsjdEstimate out;
  out.esjd = {a.mean * eps2, a.std_error * eps2, a.n};
  out.d_esjd = {a.mean * ell * ell, a.std_error * ell * ell, a.n};
  return out;
}

std::vector<BinMoments> b_conditional_moments(const TargetModel& model, double beta, double ell,
                                              std::uint64_t n_samples, Seed seed,
                                              const EstimatorOptions& opts, bool swap_roles) {
  check_samples(n_samples);
  const std::size_t d = model.dimension();
  const std::size_t K = model.size();
  const double beta_hi = upper_beta(beta, ell, d);
  std::vector<MomentAccumulator> bins(K * K);
  if (beta_hi == beta) {
    throw ArgumentError("b_conditional_moments: ell must be positive");
  }
  const PairSetup setup{beta_hi, TemperedLevel(model, beta), TemperedLevel(model, beta_hi),
                        StationarySampler(model, beta), StationarySampler(model, beta_hi)};
  const auto parts = run_batches<std::vector<MomentAccumulator>>(
      n_samples, opts, [&](std::size_t b, std::uint64_t count) {
        Rng rng(seed.child(b));
        std::vector<MomentAccumulator> local(K * K);
        draw_pairs(setup, d, count, rng,
                   [&](std::size_t j, std::size_t m, const std::vector<double>& x,
                       const std::vector<double>& y) {
                     if (swap_roles) {
                       local[m * K + j].add(log_swap_ratio(setup.lo, setup.hi, y, x));
                     } else {
                       local[j * K + m].add(log_swap_ratio(setup.lo, setup.hi, x, y));
                     }
                   });
        return local;
      });
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < bins.size(); ++i) bins[i].merge(p[i]);
  }
  std::vector<BinMoments> out;
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t m = 0; m < K; ++m) {
      const MomentAccumulator& acc = bins[j * K + m];
      BinMoments bm;
      bm.j = j;
      bm.m = m;
      bm.n = acc.count();
      bm.reported = acc.count() >= 30;
      if (bm.reported) {
        bm.mean = acc.mean();
        bm.variance = acc.variance();
        bm.mean_stderr = acc.mean_stderr();
        bm.variance_stderr = acc.variance_stderr();
      }
      out.push_back(bm);
    }
  }
  return out;
}

std::vector<ConvergenceRow> convergence_study(std::span<const RegionTemplate> templates,
                                              double beta, double ell,
                                              std::span<const std::size_t> d_list,
                                              std::uint64_t n_samples, Seed seed,
                                              const EstimatorOptions& opts) {
  for (std::size_t d : d_list) {
    if (d == 0) throw ArgumentError("convergence_study: dimensions must be positive");
    upper_beta(beta, ell, d);
  }
  const double a_limit = limiting_acceptance(instantiate(templates, 1), beta, ell);
  std::vector<ConvergenceRow> rows;
  for (std::size_t d : d_list) {
    const TargetModel model = instantiate(templates, d);
    const EstimateWithError est = estimate_acceptance(model, beta, ell, n_samples, seed.child(d), opts);
    rows.push_back({d, est.mean, est.std_error, a_limit, std::abs(est.mean - a_limit)});
  }
  return rows;
}

}  // namespace rwppt
