#include "mpc/cluster.hpp"

#include <algorithm>
#include <cmath>

namespace geocut::mpc {

Cluster::Cluster(MachineConfig cfg) : cfg_(cfg) {
  resident_.assign(cfg_.machines, 0);
}

void Cluster::add_resident(std::size_t machine, std::size_t words) {
  resident_[machine] += words;
  if (resident_[machine] > cfg_.words)
    record_failure("machine " + std::to_string(machine) + " resident words " +
                   std::to_string(resident_[machine]) + " exceed s=" +
                   std::to_string(cfg_.words));
}

void Cluster::release_resident(std::size_t machine, std::size_t words) {
  resident_[machine] -= std::min(resident_[machine], words);
}

void Cluster::round(
    const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& transfers) {
  std::vector<std::size_t> sent(cfg_.machines, 0), received(cfg_.machines, 0);
  for (const auto& [from, to, words] : transfers) {
    sent[from] += words;
    received[to] += words;
  }
  RoundRecord rec;
  for (std::size_t k = 0; k < cfg_.machines; ++k) {
    rec.max_sent = std::max(rec.max_sent, sent[k]);
    rec.max_received = std::max(rec.max_received, received[k]);
    rec.max_resident = std::max(rec.max_resident, resident_[k]);
    if (sent[k] > cfg_.words || received[k] > cfg_.words)
      record_failure("machine " + std::to_string(k) +
                     " exceeded the per-round communication budget");
  }
  log_.push_back(rec);
}

std::size_t Cluster::parent(std::size_t k) const {
  const std::size_t b = std::max<std::size_t>(cfg_.chunk(), 2);
  return (k - 1) / b;
}

std::vector<std::vector<std::size_t>> Cluster::levels() const {
  const std::size_t b = std::max<std::size_t>(cfg_.chunk(), 2);
  std::vector<std::vector<std::size_t>> out;
  if (cfg_.machines == 0) return out;
  std::vector<std::size_t> cur{0};
  while (!cur.empty()) {
    out.push_back(cur);
    std::vector<std::size_t> next;
    for (std::size_t k : cur)
      for (std::size_t c = k * b + 1; c <= k * b + b && c < cfg_.machines; ++c)
        next.push_back(c);
    cur = std::move(next);
  }
  return out;
}

void Cluster::converge_cast_words(std::vector<std::size_t> payload_words) {
  const std::size_t chunk = std::max<std::size_t>(cfg_.chunk(), 1);
  const auto lv = levels();
  // Store-and-forward, deepest level first. Relays briefly hold their
  // subtree's union; if that cannot fit in s the overflow is recorded.
  for (std::size_t depth = lv.size(); depth-- > 1;) {
    std::size_t waves = 0;
    for (std::size_t node : lv[depth])
      waves = std::max(waves, (payload_words[node] + chunk - 1) / chunk);
    std::vector<std::size_t> remaining = payload_words;
    for (std::size_t wave = 0; wave < waves; ++wave) {
      std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> transfers;
      for (std::size_t node : lv[depth]) {
        if (remaining[node] == 0) continue;
        const std::size_t w = std::min(chunk, remaining[node]);
        remaining[node] -= w;
        const std::size_t p = parent(node);
        transfers.emplace_back(node, p, w);
        add_resident(p, w);
        release_resident(node, w);
      }
      round(transfers);
    }
    for (std::size_t node : lv[depth]) {
      payload_words[parent(node)] += payload_words[node];
      payload_words[node] = 0;
    }
  }
}

void Cluster::converge_reduce_words(std::size_t f_words) {
  const std::size_t chunk = std::max<std::size_t>(cfg_.chunk(), 1);
  const auto lv = levels();
  // Aggregates combine in place: the parent folds each received chunk into
  // its own copy, so only a chunk-sized transient shows at the barrier.
  for (std::size_t depth = lv.size(); depth-- > 1;) {
    const std::size_t waves = (f_words + chunk - 1) / chunk;
    for (std::size_t wave = 0; wave < waves; ++wave) {
      const std::size_t w =
          std::min(chunk, f_words - std::min(f_words, wave * chunk));
      if (w == 0) break;
      std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> transfers;
      std::vector<std::size_t> charged;
      for (std::size_t node : lv[depth]) {
        const std::size_t p = parent(node);
        transfers.emplace_back(node, p, w);
        add_resident(p, w);
        charged.push_back(p);
      }
      round(transfers);
      for (std::size_t p : charged) release_resident(p, w);
    }
  }
}

void Cluster::broadcast_words(std::size_t payload_words, bool retain) {
  const std::size_t chunk = std::max<std::size_t>(cfg_.chunk(), 1);
  const auto lv = levels();
  const std::size_t waves = (payload_words + chunk - 1) / chunk;
  for (std::size_t depth = 0; depth + 1 < lv.size(); ++depth) {
    for (std::size_t wave = 0; wave < waves; ++wave) {
      const std::size_t w =
          std::min(chunk, payload_words - std::min(payload_words, wave * chunk));
      if (w == 0) break;
      std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> transfers;
      for (std::size_t child : lv[depth + 1]) {
        transfers.emplace_back(parent(child), child, w);
        add_resident(child, w);
      }
      round(transfers);
    }
  }
  if (!retain) {
    for (std::size_t k = 1; k < cfg_.machines; ++k)
      release_resident(k, payload_words);
  }
}

void Cluster::all_to_all_words(const std::vector<std::vector<std::size_t>>& sendmat) {
  std::vector<std::vector<std::size_t>> left = sendmat;
  bool more = true;
  while (more) {
    more = false;
    std::vector<std::size_t> sent(cfg_.machines, 0), recv(cfg_.machines, 0);
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> transfers;
    for (std::size_t i = 0; i < cfg_.machines; ++i) {
      for (std::size_t j = 0; j < cfg_.machines; ++j) {
        if (i == j || left[i][j] == 0) continue;
        const std::size_t budget =
            std::min(cfg_.words - std::min(cfg_.words, sent[i]),
                     cfg_.words - std::min(cfg_.words, recv[j]));
        const std::size_t w = std::min(left[i][j], budget);
        if (w > 0) {
          left[i][j] -= w;
          sent[i] += w;
          recv[j] += w;
          transfers.emplace_back(i, j, w);
          add_resident(j, w);
          release_resident(i, w);
        }
        if (left[i][j] > 0) more = true;
      }
    }
    if (transfers.empty()) {
      if (more) record_failure("all-to-all could not make progress within budgets");
      return;
    }
    round(transfers);
  }
}

void Cluster::record_failure(const std::string& reason) {
  if (!failed_) {
    failed_ = true;
    failure_reason_ = reason;
  }
}

std::size_t Cluster::peak_resident() const {
  std::size_t peak = 0;
  for (const auto& r : log_) peak = std::max(peak, r.max_resident);
  for (std::size_t r : resident_) peak = std::max(peak, r);
  return peak;
}

}  // namespace geocut::mpc
