#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace geocut::mpc {

struct MachineConfig {
  std::size_t machines = 1;  // m
  std::size_t words = 256;   // s: storage and per-round communication budget

  std::size_t chunk() const {  // per-edge message budget sqrt(s)
    std::size_t c = 1;
    while ((c + 1) * (c + 1) <= words) ++c;
    return c;
  }
};

struct RoundRecord {
  std::size_t max_sent = 0;
  std::size_t max_received = 0;
  std::size_t max_resident = 0;
};

// Barrier-synchronized word accounting: every message lands in a per-round
// mailbox and budgets are checked at the barrier. Machines never touch each
// other's state outside the charged transfers.
class Cluster {
 public:
  explicit Cluster(MachineConfig cfg);

  const MachineConfig& config() const { return cfg_; }
  std::size_t machines() const { return cfg_.machines; }

  // Persistent storage charges.
  void add_resident(std::size_t machine, std::size_t words);
  void release_resident(std::size_t machine, std::size_t words);
  std::size_t resident(std::size_t machine) const { return resident_[machine]; }

  // One synchronous round moving the given (from, to, words) transfers.
  // Local-compute barriers are rounds with no transfers.
  void round(const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>&
                 transfers);
  void local_round() { round({}); }

  // sqrt(s)-ary communication tree rooted at machine 0.
  std::size_t parent(std::size_t k) const;
  std::vector<std::vector<std::size_t>> levels() const;  // root level first
  std::size_t tree_depth() const { return levels().size(); }

  // Converge-cast of per-machine payloads (given in words) to the root,
  // level by level, chunked so no edge carries more than sqrt(s) per round.
  // Payloads accumulate at the root as resident words.
  void converge_cast_words(std::vector<std::size_t> payload_words);

  // Converge-cast of a fixed-size aggregate (counts, sums, sketch states):
  // every machine contributes f_words, parents fold chunks in place.
  void converge_reduce_words(std::size_t f_words);

  // Broadcast of a payload held by the root to all machines. With retain the
  // payload stays charged at every machine; otherwise only the root keeps it.
  void broadcast_words(std::size_t payload_words, bool retain = true);

  // One or more all-to-all rounds; entry (i, j) gives words from i to j.
  // Splits into waves so per-round send/receive stays within s.
  void all_to_all_words(const std::vector<std::vector<std::size_t>>& sendmat);

  // Failure recording (budget overruns mark the run, they do not throw).
  bool failed() const { return failed_; }
  const std::string& failure_reason() const { return failure_reason_; }
  void record_failure(const std::string& reason);

  std::size_t total_rounds() const { return log_.size(); }
  std::size_t peak_resident() const;
  const std::vector<RoundRecord>& log() const { return log_; }

 private:
  MachineConfig cfg_;
  std::vector<std::size_t> resident_;
  std::vector<RoundRecord> log_;
  bool failed_ = false;
  std::string failure_reason_;
};

}  // namespace geocut::mpc
