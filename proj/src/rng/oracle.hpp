#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace geocut::rng {

// Each logical stream of randomness gets its own tag so that variates for
// timelines, masks, check-set membership, sketch perturbations etc. never
// collide, no matter which backend regenerates them.
enum class StreamTag : std::uint8_t {
  kTimeline = 0,      // activation timeline variates A^(r)_t
  kMask = 1,          // mask variates K^(r)_t
  kCheck = 2,         // check-set membership critical value (one per point)
  kWeightMult = 3,    // sketched-weight perturbation multiplier
  kWeightFail = 4,    // simulated sketch failure coin
  kGeoDraw = 5,       // geometric sampler draw (selection)
  kGeoBottom = 6,     // geometric sampler bot/success coin
  kGeoMult = 7,       // geometric sampler probability perturbation
  kGeoFail = 8,       // geometric sampler undetectable-failure coin
  kActCoin = 9,       // Ber(min{1/(t p*),1}) coin in dynamic summary building
  kDatasetGen = 10,   // dataset generator stream
  kProcess = 11,      // reserved for process-local draws
};

// Identifies whose randomness a variate belongs to. Streaming backends must
// regenerate bits from the point value alone, so they address by coordinates;
// index addressing keeps duplicate points independent in MPC/reference mode.
struct OwnerId {
  enum class Kind : std::uint8_t { kGlobal = 0, kIndex = 1, kCoords = 2 };

  Kind kind = Kind::kGlobal;
  std::uint64_t index = 0;
  std::vector<double> coords;

  static OwnerId global() { return OwnerId{}; }
  static OwnerId by_index(std::uint64_t i) {
    OwnerId o;
    o.kind = Kind::kIndex;
    o.index = i;
    return o;
  }
  static OwnerId by_coords(std::span<const double> c) {
    OwnerId o;
    o.kind = Kind::kCoords;
    o.coords.assign(c.begin(), c.end());
    return o;
  }
};

// Deterministic keyed bit source. A 128-bit key drives a SipHash-2-4 PRF over
// the serialized (owner, stream, t, idx) address; one call yields a 64-bit
// word which is consumed either as a dyadic rational in [0,1) or as raw bits.
// Stateless after construction and safe for concurrent use.
class RandomOracle {
 public:
  RandomOracle();  // key from OS entropy
  explicit RandomOracle(const std::array<std::uint8_t, 16>& key);

  // Parses a hex key of up to 32 nibbles (zero padded on the left).
  static std::optional<RandomOracle> from_hex(const std::string& hex);

  std::string key_hex() const;
  const std::array<std::uint8_t, 16>& key() const { return key_; }

  // 64-bit PRF word for an address.
  std::uint64_t word(const OwnerId& owner, StreamTag stream, std::uint64_t t,
                     std::uint64_t idx = 0) const;

  // B = 64 bit dyadic rational, uniform on [0,1).
  double uniform(const OwnerId& owner, StreamTag stream, std::uint64_t t,
                 std::uint64_t idx = 0) const;

  bool bernoulli(double prob, const OwnerId& owner, StreamTag stream,
                 std::uint64_t t, std::uint64_t idx = 0) const {
    return uniform(owner, stream, t, idx) < prob;
  }

  // Derives an independent oracle (for repetition r of an experiment).
  RandomOracle derived(std::uint64_t salt) const;

 private:
  std::array<std::uint8_t, 16> key_{};
};

// SipHash-2-4 with a 128-bit key; the PRF primitive behind the oracle.
std::uint64_t siphash24(const std::array<std::uint8_t, 16>& key,
                        std::span<const std::uint8_t> data);

}  // namespace geocut::rng
