#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "io/dataset_io.hpp"
#include "rng/oracle.hpp"

namespace geocut::io {

struct ExperimentConfig {
  std::string backend = "ref";  // ref|mpc|stream-insert|stream-dynamic|oracle
  double epsilon = 0.3;
  std::string weights = "exact";
  std::size_t repetitions = 1;
  std::optional<std::string> key_hex;

  // mpc
  std::size_t machines = 1;
  std::size_t words = 4096;

  // streaming
  double big_d = 2.0;
  std::optional<double> eps_pr;
  std::optional<std::size_t> n_hint;

  bool oracle_compare = false;
  bool query_all = false;
  std::size_t brute_cap = 20;
  std::size_t seed_cap = 24;

  // Parses the CLI/JSON configuration; throws std::invalid_argument on junk.
  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
};

// One repetition row; the CSV column order is fixed:
// rep,backend,n,d,p,epsilon,f,cut_value,opt_f,gap_over_T,summary_size,
// seed_len,check_size,rounds,peak_words,words,failures
struct RepetitionRow {
  std::size_t rep = 0;
  std::string backend;
  std::size_t n = 0, d = 0;
  double p = 2.0;
  double epsilon = 0.0;
  double f = 0.0;
  double cut_value = 0.0;
  std::optional<double> opt_f;
  std::optional<double> gap_over_t;
  std::size_t summary_size = 0;
  std::size_t seed_len = 0;
  std::size_t check_size = 0;
  std::size_t rounds = 0;
  std::size_t peak_words = 0;
  std::size_t words = 0;
  std::size_t failures = 0;
  std::vector<int> sides;  // per-point 0/1 when query_all is set
};

struct ExperimentReport {
  std::string json;  // schema-versioned full report
  std::string csv;   // fixed-order rows
  std::vector<RepetitionRow> rows;
};

// Runs the configured backend over a dataset (ref, mpc, oracle).
ExperimentReport run_experiment(const core::Dataset& ds, const ExperimentConfig& cfg);

// Runs a streaming backend over an update stream.
ExperimentReport run_stream_experiment(const StreamFile& stream,
                                       const ExperimentConfig& cfg);

std::string csv_header();

// Merges row arrays from several JSON reports into one CSV.
std::string merge_reports_csv(const std::vector<std::string>& report_jsons);

}  // namespace geocut::io
