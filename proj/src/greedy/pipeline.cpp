#include "greedy/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace geocut::greedy {

PipelineResult run_reference_pipeline(const core::Dataset& ds,
                                      const PipelineOptions& opts,
                                      const rng::RandomOracle& oracle) {
  const std::size_t n = ds.size();
  if (n < 2 || !ds.has_two_distinct())
    throw std::invalid_argument("need at least two non-equal points");

  PipelineResult out;
  const auto owners = make_owners(ds, opts.addressing);

  // Timeline weights in (0, 1/2] plus the compatibility factor they carry.
  double lambda = 8.0;
  std::vector<double> w;
  if (opts.weight_override.has_value()) {
    w = *opts.weight_override;
    if (opts.lambda_override.has_value()) lambda = *opts.lambda_override;
  } else {
    weights::WeightVector raw;
    switch (opts.weight_mode.mode) {
      case weights::Mode::kExact:
        raw = weights::exact_weights(ds);
        break;
      case weights::Mode::kSketched: {
        auto sk = weights::sketched_weights(ds, opts.weight_mode.epsilon,
                                            opts.weight_mode.delta, oracle, owners);
        raw = std::move(sk.weights);
        out.weight_failure_event = sk.failure_event;
        break;
      }
      case weights::Mode::kDynamic: {
        auto sk =
            weights::dynamic_weight_oracle(ds, opts.weight_mode.big_d, oracle, owners);
        raw = std::move(sk.weights);
        for (double& wi : raw.w) wi /= opts.weight_mode.big_d;  // then halved below
        lambda = 8.0 * opts.weight_mode.big_d;
        break;
      }
    }
    w = weights::compatible_transform(raw, lambda).w;
    if (opts.lambda_override.has_value()) lambda = *opts.lambda_override;
  }
  out.weights_used = w;

  out.params = opts.params_override.has_value()
                   ? *opts.params_override
                   : compute_params(n, opts.epsilon, lambda);
  BuildResult built = build_summary(ds, w, out.params, oracle, owners);
  out.summary_size = built.summary.entries.size();
  out.act_times = built.act_times;

  AssignSession session(ds, built.summary, out.params, AssignMode::kStatic);
  out.seed_length = session.seed_length();

  const double delta = opts.delta_seed > 0.0 ? opts.delta_seed : opts.epsilon;
  out.xi = xi_for(lambda, static_cast<double>(out.seed_length),
                  std::log(static_cast<double>(n)), opts.epsilon, delta);

  std::vector<double> probs = opts.check_prob_override.has_value()
                                  ? *opts.check_prob_override
                                  : seedselect::check_probs(w, out.xi);
  const auto ranks = canonical_ranks(ds);
  const auto samples =
      seedselect::draw_check_set(ds, probs, built.act_times, oracle, owners, ranks);
  out.check_size = samples.size();

  if (opts.seed_override.has_value()) {
    session.apply_seed(*opts.seed_override);
    out.seed = *opts.seed_override;
  } else {
    auto choice = seedselect::select_seed(ds, session, samples, opts.seed_cap);
    out.seed = choice.seed;
    out.seed_truncated = choice.truncated;
  }

  out.cut = session.full_cut(built.act_times);
  out.f = core::objective_f(ds, out.cut);
  out.cut_value = core::cut_value(ds, out.cut);
  return out;
}

}  // namespace geocut::greedy
