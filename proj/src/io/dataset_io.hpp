#pragma once

#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "rng/oracle.hpp"

namespace geocut::io {

// Dataset file: one point per line, comma- or whitespace-separated numbers;
// optional header "# d=<d> p=<p> [delta=<D>]".
core::Dataset load_dataset(const std::string& path);
core::Dataset parse_dataset(const std::string& text);
void save_dataset(const core::Dataset& ds, const std::string& path);

// Stream file: lines "+ c1 ... cd" / "- c1 ... cd", same optional header.
struct StreamOp {
  bool insert = true;
  core::Point point;
};
struct StreamFile {
  std::vector<StreamOp> ops;
  double p = 2.0;
  std::optional<std::int64_t> delta;
};
StreamFile load_stream(const std::string& path);
StreamFile parse_stream(const std::string& text);

// Generator specs: "uniform-grid:<delta>:<d>:<n>", "gaussian-clusters:<k>:<sigma>:<n>"
// (d = 2), "simplex:<n>". Deterministic from the oracle key.
core::Dataset gen_dataset(const std::string& spec, const rng::RandomOracle& oracle);

}  // namespace geocut::io
