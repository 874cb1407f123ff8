// geocut command-line driver. Talks to the engines exclusively through the
// shared library's C interface.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geocut/geocut.h"

namespace {

int fail(geocut_status status) {
  std::cerr << "error (" << geocut_status_name(status) << "): " << geocut_last_error()
            << "\n";
  return 1;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) return false;
  out << text;
  return bool(out);
}

struct CommonOpts {
  std::string input;
  std::string seed;
  double epsilon = 0.3;
  std::string weights = "exact";
  std::size_t repetitions = 1;
  std::size_t machines = 1;
  std::size_t words = 4096;
  double big_d = 2.0;
  std::string eps_pr = "auto";
  std::size_t n_hint = 0;
  bool oracle_compare = false;
  bool query_all = false;
  std::string json_out;
  std::string csv_out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool stream_backend) {
  cmd->add_option("--input", o.input, "input file")->required();
  cmd->add_option("--seed", o.seed, "hex oracle key (env GEOCUT_SEED overrides)");
  cmd->add_option("--epsilon", o.epsilon, "accuracy parameter");
  cmd->add_option("--weights", o.weights,
                  "exact | sketched:<eps>:<delta> | dynamic:<D>");
  cmd->add_option("--reps", o.repetitions, "repetitions");
  cmd->add_option("--json", o.json_out, "write the JSON report here");
  cmd->add_option("--csv", o.csv_out, "write the CSV rows here");
  cmd->add_flag("--oracle-compare", o.oracle_compare,
                "attach the brute-force optimum when n is small");
  cmd->add_flag("--query-all", o.query_all, "emit per-point sides");
  if (stream_backend) {
    cmd->add_option("--D", o.big_d, "sampler sandwich factor");
    cmd->add_option("--eps-pr", o.eps_pr, "probability slack or 'auto'");
    cmd->add_option("--n-hint", o.n_hint, "cardinality hint for t_e");
  }
}

std::string build_config(const std::string& backend, const CommonOpts& o) {
  std::ostringstream j;
  j << "{\"backend\":\"" << backend << "\",\"epsilon\":" << o.epsilon
    << ",\"weights\":\"" << o.weights << "\",\"repetitions\":" << o.repetitions
    << ",\"machines\":" << o.machines << ",\"words\":" << o.words
    << ",\"D\":" << o.big_d;
  const char* env_seed = std::getenv("GEOCUT_SEED");
  const std::string seed = env_seed != nullptr ? env_seed : o.seed;
  if (!seed.empty()) j << ",\"seed\":\"" << seed << "\"";
  if (o.eps_pr != "auto" && !o.eps_pr.empty()) j << ",\"eps_pr\":" << o.eps_pr;
  if (o.n_hint > 0) j << ",\"n_hint\":" << o.n_hint;
  if (o.oracle_compare) j << ",\"oracle_compare\":true";
  if (o.query_all) j << ",\"query_all\":true";
  j << "}";
  return j.str();
}

int emit(geocut_result* result, const CommonOpts& o) {
  const std::string json = geocut_result_json(result);
  const std::string csv = geocut_result_csv(result);
  geocut_result_free(result);
  if (!o.json_out.empty() && !write_file(o.json_out, json)) {
    std::cerr << "error: cannot write " << o.json_out << "\n";
    return 1;
  }
  if (!o.csv_out.empty() && !write_file(o.csv_out, csv)) {
    std::cerr << "error: cannot write " << o.csv_out << "\n";
    return 1;
  }
  if (o.json_out.empty()) std::cout << json << "\n";
  return 0;
}

int run_dataset_backend(const std::string& backend, const CommonOpts& o) {
  geocut_dataset* ds = nullptr;
  geocut_status status = geocut_dataset_load(o.input.c_str(), &ds);
  if (status != GEOCUT_OK) return fail(status);
  geocut_result* result = nullptr;
  status = geocut_run_dataset(ds, build_config(backend, o).c_str(), &result);
  geocut_dataset_free(ds);
  if (status != GEOCUT_OK) return fail(status);
  return emit(result, o);
}

int run_stream_backend(const std::string& backend, const CommonOpts& o) {
  const auto text = read_file(o.input);
  if (!text.has_value()) {
    std::cerr << "error: cannot open " << o.input << "\n";
    return 1;
  }
  geocut_result* result = nullptr;
  const geocut_status status =
      geocut_run_stream(text->c_str(), build_config(backend, o).c_str(), &result);
  if (status != GEOCUT_OK) return fail(status);
  return emit(result, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approximate Euclidean max-cut: reference, MPC-simulated, and "
               "streaming engines"};
  app.require_subcommand(1);

  // gen
  std::string gen_spec, gen_seed, gen_out;
  auto* gen = app.add_subcommand("gen", "generate a dataset file");
  gen->add_option("--spec", gen_spec,
                  "uniform-grid:<delta>:<d>:<n> | gaussian-clusters:<k>:<sigma>:<n> "
                  "| simplex:<n>")
      ->required();
  gen->add_option("--seed", gen_seed, "hex key");
  gen->add_option("--out", gen_out, "output path")->required();

  CommonOpts ref_o, mpc_o, ins_o, dyn_o, orc_o;
  auto* ref = app.add_subcommand("ref", "shared-memory reference pipeline");
  add_common(ref, ref_o, false);
  auto* mpc = app.add_subcommand("mpc", "round-based MPC simulation");
  add_common(mpc, mpc_o, false);
  mpc->add_option("--machines", mpc_o.machines, "machine count");
  mpc->add_option("--words", mpc_o.words, "words of memory per machine");
  auto* ins = app.add_subcommand("stream-insert", "insertion-only streaming engine");
  add_common(ins, ins_o, true);
  auto* dyn = app.add_subcommand("stream-dynamic", "dynamic streaming engine");
  add_common(dyn, dyn_o, true);
  auto* orc = app.add_subcommand("oracle", "brute-force optimum");
  add_common(orc, orc_o, false);

  // report: merge row arrays from JSON reports into one CSV
  std::vector<std::string> report_inputs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "merge JSON reports into a CSV");
  report->add_option("--inputs", report_inputs, "report JSON files")->required();
  report->add_option("--out", report_out, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    geocut_dataset* ds = nullptr;
    const char* env_seed = std::getenv("GEOCUT_SEED");
    const std::string seed = env_seed != nullptr ? env_seed : gen_seed;
    const geocut_status status = geocut_dataset_generate(
        gen_spec.c_str(), seed.empty() ? nullptr : seed.c_str(), &ds);
    if (status != GEOCUT_OK) return fail(status);
    const geocut_status save_status = geocut_dataset_save(ds, gen_out.c_str());
    geocut_dataset_free(ds);
    if (save_status != GEOCUT_OK) return fail(save_status);
    std::cout << "wrote " << gen_out << "\n";
    return 0;
  }
  if (ref->parsed()) return run_dataset_backend("ref", ref_o);
  if (mpc->parsed()) return run_dataset_backend("mpc", mpc_o);
  if (orc->parsed()) return run_dataset_backend("oracle", orc_o);
  if (ins->parsed()) return run_stream_backend("stream-insert", ins_o);
  if (dyn->parsed()) return run_stream_backend("stream-dynamic", dyn_o);
  if (report->parsed()) {
    std::vector<std::string> texts;
    std::vector<const char*> ptrs;
    for (const auto& path : report_inputs) {
      auto text = read_file(path);
      if (!text.has_value()) {
        std::cerr << "error: cannot open " << path << "\n";
        return 1;
      }
      texts.push_back(std::move(*text));
    }
    for (const auto& t : texts) ptrs.push_back(t.c_str());
    char* csv = nullptr;
    const geocut_status status = geocut_merge_reports(ptrs.data(), ptrs.size(), &csv);
    if (status != GEOCUT_OK) return fail(status);
    const std::string merged = csv;
    geocut_string_free(csv);
    if (!report_out.empty()) {
      if (!write_file(report_out, merged)) {
        std::cerr << "error: cannot write " << report_out << "\n";
        return 1;
      }
    } else {
      std::cout << merged;
    }
    return 0;
  }
  return 0;
}
