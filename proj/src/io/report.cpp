#include "io/report.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "core/cut.hpp"
#include "greedy/pipeline.hpp"
#include "mpc/emaxcut.hpp"
#include "stream/dynamic.hpp"
#include "stream/insert.hpp"
#include "weights/weights.hpp"

namespace geocut::io {

using ordered_json = nlohmann::ordered_json;

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("bad config json: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.backend = j.value("backend", cfg.backend);
  cfg.epsilon = j.value("epsilon", cfg.epsilon);
  cfg.weights = j.value("weights", cfg.weights);
  cfg.repetitions = j.value("repetitions", cfg.repetitions);
  if (j.contains("seed")) cfg.key_hex = j.at("seed").get<std::string>();
  cfg.machines = j.value("machines", cfg.machines);
  cfg.words = j.value("words", cfg.words);
  cfg.big_d = j.value("D", cfg.big_d);
  if (j.contains("eps_pr") && j.at("eps_pr").is_number())
    cfg.eps_pr = j.at("eps_pr").get<double>();
  if (j.contains("n_hint")) cfg.n_hint = j.at("n_hint").get<std::size_t>();
  cfg.oracle_compare = j.value("oracle_compare", cfg.oracle_compare);
  cfg.query_all = j.value("query_all", cfg.query_all);
  cfg.brute_cap = j.value("brute_cap", cfg.brute_cap);
  cfg.seed_cap = j.value("seed_cap", cfg.seed_cap);
  if (cfg.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  const std::set<std::string> known{"ref", "mpc", "stream-insert", "stream-dynamic",
                                    "oracle"};
  if (!known.count(cfg.backend))
    throw std::invalid_argument("unknown backend: " + cfg.backend);
  if (!weights::ModeSpec::parse(cfg.weights).has_value())
    throw std::invalid_argument("bad weights spec: " + cfg.weights);
  return cfg;
}

std::string ExperimentConfig::to_json() const {
  ordered_json j;
  j["backend"] = backend;
  j["epsilon"] = epsilon;
  j["weights"] = weights;
  j["repetitions"] = repetitions;
  if (key_hex.has_value()) j["seed"] = *key_hex;
  j["machines"] = machines;
  j["words"] = words;
  j["D"] = big_d;
  if (eps_pr.has_value()) j["eps_pr"] = *eps_pr;
  if (n_hint.has_value()) j["n_hint"] = *n_hint;
  j["oracle_compare"] = oracle_compare;
  j["query_all"] = query_all;
  j["brute_cap"] = brute_cap;
  j["seed_cap"] = seed_cap;
  return j.dump();
}

std::string csv_header() {
  return "rep,backend,n,d,p,epsilon,f,cut_value,opt_f,gap_over_T,summary_size,"
         "seed_len,check_size,rounds,peak_words,words,failures";
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string row_csv(const RepetitionRow& r) {
  std::ostringstream out;
  out << r.rep << ',' << r.backend << ',' << r.n << ',' << r.d << ','
      << fmt_double(r.p) << ',' << fmt_double(r.epsilon) << ',' << fmt_double(r.f)
      << ',' << fmt_double(r.cut_value) << ','
      << (r.opt_f.has_value() ? fmt_double(*r.opt_f) : "") << ','
      << (r.gap_over_t.has_value() ? fmt_double(*r.gap_over_t) : "") << ','
      << r.summary_size << ',' << r.seed_len << ',' << r.check_size << ','
      << r.rounds << ',' << r.peak_words << ',' << r.words << ',' << r.failures;
  return out.str();
}

ordered_json row_json(const RepetitionRow& r) {
  ordered_json j;
  j["rep"] = r.rep;
  j["backend"] = r.backend;
  j["n"] = r.n;
  j["d"] = r.d;
  j["p"] = r.p;
  j["epsilon"] = r.epsilon;
  j["f"] = r.f;
  j["cut_value"] = r.cut_value;
  if (r.opt_f.has_value()) j["opt_f"] = *r.opt_f;
  if (r.gap_over_t.has_value()) j["gap_over_T"] = *r.gap_over_t;
  j["summary_size"] = r.summary_size;
  j["seed_len"] = r.seed_len;
  j["check_size"] = r.check_size;
  j["rounds"] = r.rounds;
  j["peak_words"] = r.peak_words;
  j["words"] = r.words;
  j["failures"] = r.failures;
  if (!r.sides.empty()) j["sides"] = r.sides;
  return j;
}

RepetitionRow base_row(const core::Dataset& ds, const ExperimentConfig& cfg,
                       std::size_t rep) {
  RepetitionRow row;
  row.rep = rep;
  row.backend = cfg.backend;
  row.n = ds.size();
  row.d = ds.dim();
  row.p = ds.p;
  row.epsilon = cfg.epsilon;
  return row;
}

void attach_oracle_gap(RepetitionRow& row, const core::Dataset& ds,
                       const ExperimentConfig& cfg) {
  if (!cfg.oracle_compare || ds.size() > cfg.brute_cap) return;
  const auto best = core::brute_force_opt(ds, cfg.brute_cap);
  row.opt_f = best.f;
  const auto summary = core::distance_summary(ds);
  if (summary.total > 0.0) row.gap_over_t = (row.f - best.f) / summary.total;
}

void attach_sides(RepetitionRow& row, const core::Cut& cut, bool query_all) {
  if (!query_all) return;
  row.sides.reserve(cut.rows.size());
  for (auto r : cut.rows) row.sides.push_back(r == core::Row::kSideOne ? 1 : 0);
}

ExperimentReport finish(const core::Dataset* ds, const ExperimentConfig& cfg,
                        const std::string& key_hex, std::vector<RepetitionRow> rows) {
  ExperimentReport rep;
  ordered_json j;
  j["schema"] = 1;
  j["config"] = ordered_json::parse(cfg.to_json());
  j["key"] = key_hex;
  if (ds != nullptr) {
    j["n"] = ds->size();
    j["d"] = ds->dim();
    j["p"] = ds->p;
    if (ds->delta.has_value()) j["delta"] = *ds->delta;
  }
  ordered_json jrows = ordered_json::array();
  double mean_f = 0.0, mean_cut = 0.0;
  double m2_f = 0.0;
  for (const auto& row : rows) jrows.push_back(row_json(row));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double delta = rows[i].f - mean_f;
    mean_f += delta / static_cast<double>(i + 1);
    m2_f += delta * (rows[i].f - mean_f);
    mean_cut += rows[i].cut_value;
  }
  j["rows"] = jrows;
  ordered_json agg;
  agg["mean_f"] = mean_f;
  agg["stdev_f"] = rows.size() > 1 ? std::sqrt(m2_f / static_cast<double>(rows.size() - 1))
                                   : 0.0;
  agg["mean_cut_value"] = rows.empty() ? 0.0 : mean_cut / static_cast<double>(rows.size());
  j["aggregate"] = agg;
  rep.json = j.dump(2);

  std::ostringstream csv;
  csv << csv_header() << '\n';
  for (const auto& row : rows) csv << row_csv(row) << '\n';
  rep.csv = csv.str();
  rep.rows = std::move(rows);
  return rep;
}

rng::RandomOracle oracle_from(const ExperimentConfig& cfg) {
  if (cfg.key_hex.has_value()) {
    auto oracle = rng::RandomOracle::from_hex(*cfg.key_hex);
    if (!oracle.has_value()) throw std::invalid_argument("bad hex key");
    return *oracle;
  }
  return rng::RandomOracle();  // OS entropy, echoed in the report
}

}  // namespace

ExperimentReport run_experiment(const core::Dataset& ds, const ExperimentConfig& cfg) {
  const rng::RandomOracle base = oracle_from(cfg);
  std::vector<RepetitionRow> rows;

  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    const rng::RandomOracle oracle = cfg.repetitions == 1 ? base : base.derived(rep);
    RepetitionRow row = base_row(ds, cfg, rep);
    if (cfg.backend == "oracle") {
      const auto best = core::brute_force_opt(ds, cfg.brute_cap);
      row.f = best.f;
      row.cut_value = core::cut_value(ds, best.cut);
      row.opt_f = best.f;
      row.gap_over_t = 0.0;
      attach_sides(row, best.cut, cfg.query_all);
    } else if (cfg.backend == "ref") {
      greedy::PipelineOptions opts;
      opts.epsilon = cfg.epsilon;
      opts.weight_mode = *weights::ModeSpec::parse(cfg.weights);
      opts.seed_cap = cfg.seed_cap;
      const auto res = greedy::run_reference_pipeline(ds, opts, oracle);
      row.f = res.f;
      row.cut_value = res.cut_value;
      row.summary_size = res.summary_size;
      row.seed_len = res.seed_length;
      row.check_size = res.check_size;
      row.failures = (res.weight_failure_event ? 1 : 0) + (res.seed_truncated ? 1 : 0);
      attach_oracle_gap(row, ds, cfg);
      attach_sides(row, res.cut, cfg.query_all);
    } else if (cfg.backend == "mpc") {
      const auto world = mpc::World::contiguous(ds, cfg.machines, cfg.words);
      const auto res = mpc::mpc_e_max_cut(world, cfg.epsilon,
                                          *weights::ModeSpec::parse(cfg.weights),
                                          oracle, cfg.seed_cap);
      row.f = res.f;
      row.cut_value = res.cut_value;
      row.summary_size = res.summary_size;
      row.seed_len = res.seed_length;
      row.check_size = res.check_size;
      row.rounds = res.rounds;
      row.peak_words = res.peak_words;
      row.failures = (res.weight_failure_event ? 1 : 0) +
                     (res.protocol_failed ? 1 : 0) + (res.seed_truncated ? 1 : 0);
      attach_oracle_gap(row, ds, cfg);
      attach_sides(row, res.cut, cfg.query_all);
    } else {
      throw std::invalid_argument("backend " + cfg.backend +
                                  " needs a stream input file");
    }
    rows.push_back(std::move(row));
  }
  return finish(&ds, cfg, base.key_hex(), std::move(rows));
}

ExperimentReport run_stream_experiment(const StreamFile& stream,
                                       const ExperimentConfig& cfg) {
  if (!stream.delta.has_value())
    throw std::invalid_argument("stream file needs a delta header");
  if (stream.ops.empty()) throw std::invalid_argument("empty stream");
  const std::size_t dim = stream.ops.front().point.size();
  const rng::RandomOracle base = oracle_from(cfg);

  // Survivor set (for reporting and the objective).
  core::Dataset survivors;
  survivors.p = stream.p;
  survivors.delta = stream.delta;
  {
    std::set<core::Point> live;
    for (const auto& op : stream.ops) {
      if (op.insert)
        live.insert(op.point);
      else
        live.erase(op.point);
    }
    survivors.points.assign(live.begin(), live.end());
  }

  std::vector<RepetitionRow> rows;
  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    const rng::RandomOracle oracle = cfg.repetitions == 1 ? base : base.derived(rep);
    RepetitionRow row = base_row(survivors, cfg, rep);
    core::Cut cut = core::Cut::unassigned(survivors.size());

    if (cfg.backend == "stream-insert") {
      stream::InsertOptions opts;
      opts.epsilon = cfg.epsilon;
      opts.n_hint = cfg.n_hint.has_value() ? cfg.n_hint
                                           : std::optional<std::size_t>(stream.ops.size());
      opts.seed_cap = cfg.seed_cap;
      stream::InsertEngine eng(dim, *stream.delta, stream.p, oracle, opts);
      for (const auto& op : stream.ops) {
        if (!op.insert)
          throw std::invalid_argument("stream-insert cannot process deletions");
        eng.add_point(op.point);
      }
      eng.preprocess();
      for (std::size_t i = 0; i < survivors.size(); ++i)
        cut.rows[i] = eng.assign_query(survivors.points[i]);
      const auto space = eng.space_report();
      row.summary_size = space.p_size;
      row.seed_len = space.m;
      row.check_size = space.c_size;
      row.words = space.words;
    } else if (cfg.backend == "stream-dynamic") {
      stream::DynOptions opts;
      opts.epsilon = cfg.epsilon;
      opts.big_d = cfg.big_d;
      opts.eps_pr = cfg.eps_pr;
      opts.n_hint = cfg.n_hint.has_value() ? cfg.n_hint
                                           : std::optional<std::size_t>(stream.ops.size());
      opts.seed_cap = cfg.seed_cap;
      stream::DynamicEngine eng(dim, *stream.delta, stream.p, oracle, opts);
      for (const auto& op : stream.ops) eng.update(op.insert, op.point);
      eng.finalize();
      for (std::size_t i = 0; i < survivors.size(); ++i)
        cut.rows[i] = eng.assign_query(survivors.points[i]);
      const auto& drep = eng.report();
      row.summary_size = drep.summary_size;
      row.seed_len = drep.m;
      row.check_size = drep.pair_successes;
      row.words = drep.draws_consumed;
      row.failures = (drep.build_failed ? 1 : 0) + (drep.seed_failed ? 1 : 0) +
                     (drep.sampler_failure ? 1 : 0);
    } else {
      throw std::invalid_argument("backend " + cfg.backend +
                                  " does not take a stream input");
    }

    row.f = core::objective_f(survivors, cut);
    row.cut_value = core::cut_value(survivors, cut);
    attach_oracle_gap(row, survivors, cfg);
    attach_sides(row, cut, cfg.query_all);
    rows.push_back(std::move(row));
  }
  return finish(&survivors, cfg, base.key_hex(), std::move(rows));
}

std::string merge_reports_csv(const std::vector<std::string>& report_jsons) {
  std::ostringstream out;
  out << csv_header() << '\n';
  for (const auto& text : report_jsons) {
    const auto j = ordered_json::parse(text);
    if (!j.contains("rows")) continue;
    for (const auto& r : j.at("rows")) {
      RepetitionRow row;
      row.rep = r.value("rep", 0);
      row.backend = r.value("backend", std::string{});
      row.n = r.value("n", 0);
      row.d = r.value("d", 0);
      row.p = r.value("p", 2.0);
      row.epsilon = r.value("epsilon", 0.0);
      row.f = r.value("f", 0.0);
      row.cut_value = r.value("cut_value", 0.0);
      if (r.contains("opt_f")) row.opt_f = r.at("opt_f").get<double>();
      if (r.contains("gap_over_T")) row.gap_over_t = r.at("gap_over_T").get<double>();
      row.summary_size = r.value("summary_size", 0);
      row.seed_len = r.value("seed_len", 0);
      row.check_size = r.value("check_size", 0);
      row.rounds = r.value("rounds", 0);
      row.peak_words = r.value("peak_words", 0);
      row.words = r.value("words", 0);
      row.failures = r.value("failures", 0);
      out << row_csv(row) << '\n';
    }
  }
  return out.str();
}

}  // namespace geocut::io
