#include "geocut/geocut.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "core/dataset.hpp"
#include "io/dataset_io.hpp"
#include "io/report.hpp"
#include "rng/oracle.hpp"

struct geocut_dataset {
  geocut::core::Dataset ds;
};

struct geocut_result {
  geocut::io::ExperimentReport report;
};

namespace {

thread_local std::string g_last_error;

geocut_status set_error(geocut_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

geocut_status classify(const std::exception& e) {
  const std::string what = e.what();
  if (what.find("zero total distance") != std::string::npos ||
      what.find("non-equal") != std::string::npos ||
      what.find("fewer than two") != std::string::npos)
    return set_error(GEOCUT_ERR_DEGENERATE, what);
  if (what.find("exceeds cap") != std::string::npos ||
      what.find("ceiling") != std::string::npos)
    return set_error(GEOCUT_ERR_TOO_LARGE, what);
  if (what.find("cannot open") != std::string::npos ||
      what.find("cannot write") != std::string::npos)
    return set_error(GEOCUT_ERR_IO, what);
  if (dynamic_cast<const std::logic_error*>(&e) != nullptr)
    return set_error(GEOCUT_ERR_STATE, what);
  return set_error(GEOCUT_ERR_INVALID_ARGUMENT, what);
}

}  // namespace

extern "C" {

const char* geocut_status_name(geocut_status status) {
  switch (status) {
    case GEOCUT_OK: return "ok";
    case GEOCUT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GEOCUT_ERR_IO: return "io error";
    case GEOCUT_ERR_PARSE: return "parse error";
    case GEOCUT_ERR_DEGENERATE: return "degenerate input";
    case GEOCUT_ERR_TOO_LARGE: return "instance too large";
    case GEOCUT_ERR_STATE: return "invalid call sequence";
    case GEOCUT_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* geocut_last_error(void) { return g_last_error.c_str(); }

geocut_status geocut_dataset_load(const char* path, geocut_dataset** out) {
  if (path == nullptr || out == nullptr)
    return set_error(GEOCUT_ERR_INVALID_ARGUMENT, "null argument");
  try {
    auto* handle = new geocut_dataset{geocut::io::load_dataset(path)};
    *out = handle;
    return GEOCUT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

geocut_status geocut_dataset_parse(const char* text, geocut_dataset** out) {
  if (text == nullptr || out == nullptr)
    return set_error(GEOCUT_ERR_INVALID_ARGUMENT, "null argument");
  try {
    auto* handle = new geocut_dataset{geocut::io::parse_dataset(text)};
    *out = handle;
    return GEOCUT_OK;
  } catch (const std::exception& e) {
    return set_error(GEOCUT_ERR_PARSE, e.what());
  }
}

geocut_status geocut_dataset_generate(const char* spec, const char* key_hex,
                                      geocut_dataset** out) {
  if (spec == nullptr || out == nullptr)
    return set_error(GEOCUT_ERR_INVALID_ARGUMENT, "null argument");
  try {
    geocut::rng::RandomOracle oracle;
    if (key_hex != nullptr) {
      auto parsed = geocut::rng::RandomOracle::from_hex(key_hex);
      if (!parsed.has_value())
        return set_error(GEOCUT_ERR_INVALID_ARGUMENT, "bad hex key");
      oracle = *parsed;
    }
    auto* handle = new geocut_dataset{geocut::io::gen_dataset(spec, oracle)};
    *out = handle;
    return GEOCUT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

geocut_status geocut_dataset_save(const geocut_dataset* ds, const char* path) {
  if (ds == nullptr || path == nullptr)
    return set_error(GEOCUT_ERR_INVALID_ARGUMENT, "null argument");
  try {
    geocut::io::save_dataset(ds->ds, path);
    return GEOCUT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

size_t geocut_dataset_size(const geocut_dataset* ds) {
  return ds == nullptr ? 0 : ds->ds.size();
}

size_t geocut_dataset_dim(const geocut_dataset* ds) {
  return ds == nullptr ? 0 : ds->ds.dim();
}

void geocut_dataset_free(geocut_dataset* ds) { delete ds; }

geocut_status geocut_run_dataset(const geocut_dataset* ds, const char* config_json,
                                 geocut_result** out) {
  if (ds == nullptr || config_json == nullptr || out == nullptr)
    return set_error(GEOCUT_ERR_INVALID_ARGUMENT, "null argument");
  try {
    const auto cfg = geocut::io::ExperimentConfig::from_json(config_json);
    auto* handle = new geocut_result{geocut::io::run_experiment(ds->ds, cfg)};
    *out = handle;
    return GEOCUT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

geocut_status geocut_run_stream(const char* stream_text, const char* config_json,
                                geocut_result** out) {
  if (stream_text == nullptr || config_json == nullptr || out == nullptr)
    return set_error(GEOCUT_ERR_INVALID_ARGUMENT, "null argument");
  try {
    const auto cfg = geocut::io::ExperimentConfig::from_json(config_json);
    const auto stream = geocut::io::parse_stream(stream_text);
    auto* handle = new geocut_result{geocut::io::run_stream_experiment(stream, cfg)};
    *out = handle;
    return GEOCUT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

const char* geocut_result_json(const geocut_result* result) {
  return result == nullptr ? "" : result->report.json.c_str();
}

const char* geocut_result_csv(const geocut_result* result) {
  return result == nullptr ? "" : result->report.csv.c_str();
}

void geocut_result_free(geocut_result* result) { delete result; }

geocut_status geocut_merge_reports(const char* const* report_jsons, size_t count,
                                   char** out_csv) {
  if (report_jsons == nullptr || out_csv == nullptr)
    return set_error(GEOCUT_ERR_INVALID_ARGUMENT, "null argument");
  try {
    std::vector<std::string> texts;
    for (size_t i = 0; i < count; ++i) texts.emplace_back(report_jsons[i]);
    const std::string merged = geocut::io::merge_reports_csv(texts);
    char* buf = new char[merged.size() + 1];
    std::memcpy(buf, merged.c_str(), merged.size() + 1);
    *out_csv = buf;
    return GEOCUT_OK;
  } catch (const std::exception& e) {
    return set_error(GEOCUT_ERR_PARSE, e.what());
  }
}

void geocut_string_free(char* text) { delete[] text; }

}  // extern "C"
