#include "rng/oracle.hpp"

#include <random>
#include <stdexcept>

namespace geocut::rng {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int b) {
  return (x << b) | (x >> (64 - b));
}

inline std::uint64_t load_le64(const std::uint8_t* p) {
  std::uint64_t v;
  std::memcpy(&v, p, 8);
  return v;  // little-endian hosts only (x86/ARM in practice)
}

#define GEOCUT_SIPROUND      \
  do {                       \
    v0 += v1;                \
    v1 = rotl(v1, 13);       \
    v1 ^= v0;                \
    v0 = rotl(v0, 32);       \
    v2 += v3;                \
    v3 = rotl(v3, 16);       \
    v3 ^= v2;                \
    v0 += v3;                \
    v3 = rotl(v3, 21);       \
    v3 ^= v0;                \
    v2 += v1;                \
    v1 = rotl(v1, 17);       \
    v1 ^= v2;                \
    v2 = rotl(v2, 32);       \
  } while (0)

void append_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void append_f64(std::vector<std::uint8_t>& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  append_u64(buf, bits);
}

}  // namespace

std::uint64_t siphash24(const std::array<std::uint8_t, 16>& key,
                        std::span<const std::uint8_t> data) {
  const std::uint64_t k0 = load_le64(key.data());
  const std::uint64_t k1 = load_le64(key.data() + 8);
  std::uint64_t v0 = 0x736f6d6570736575ULL ^ k0;
  std::uint64_t v1 = 0x646f72616e646f6dULL ^ k1;
  std::uint64_t v2 = 0x6c7967656e657261ULL ^ k0;
  std::uint64_t v3 = 0x7465646279746573ULL ^ k1;

  const std::size_t n = data.size();
  const std::size_t end = n - (n % 8);
  for (std::size_t i = 0; i < end; i += 8) {
    const std::uint64_t m = load_le64(data.data() + i);
    v3 ^= m;
    GEOCUT_SIPROUND;
    GEOCUT_SIPROUND;
    v0 ^= m;
  }
  std::uint64_t b = static_cast<std::uint64_t>(n) << 56;
  for (std::size_t i = end; i < n; ++i)
    b |= static_cast<std::uint64_t>(data[i]) << (8 * (i - end));
  v3 ^= b;
  GEOCUT_SIPROUND;
  GEOCUT_SIPROUND;
  v0 ^= b;
  v2 ^= 0xff;
  GEOCUT_SIPROUND;
  GEOCUT_SIPROUND;
  GEOCUT_SIPROUND;
  GEOCUT_SIPROUND;
  return v0 ^ v1 ^ v2 ^ v3;
}

#undef GEOCUT_SIPROUND

RandomOracle::RandomOracle() {
  std::random_device rd;
  for (std::size_t i = 0; i < key_.size(); i += 4) {
    const std::uint32_t w = rd();
    std::memcpy(key_.data() + i, &w, 4);
  }
}

RandomOracle::RandomOracle(const std::array<std::uint8_t, 16>& key) : key_(key) {}

std::optional<RandomOracle> RandomOracle::from_hex(const std::string& hex) {
  if (hex.empty() || hex.size() > 32) return std::nullopt;
  std::array<std::uint8_t, 16> key{};
  // Right-align: "ab" means key ...0x00 0xab.
  std::string padded(32 - hex.size(), '0');
  padded += hex;
  for (int i = 0; i < 16; ++i) {
    auto nibble = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    const int hi = nibble(padded[2 * i]);
    const int lo = nibble(padded[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    key[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return RandomOracle(key);
}

std::string RandomOracle::key_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(32);
  for (auto b : key_) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

std::uint64_t RandomOracle::word(const OwnerId& owner, StreamTag stream,
                                 std::uint64_t t, std::uint64_t idx) const {
  std::vector<std::uint8_t> buf;
  buf.reserve(8 * (owner.coords.size() + 4) + 4);
  buf.push_back(static_cast<std::uint8_t>(owner.kind));
  switch (owner.kind) {
    case OwnerId::Kind::kGlobal:
      break;
    case OwnerId::Kind::kIndex:
      append_u64(buf, owner.index);
      break;
    case OwnerId::Kind::kCoords:
      append_u64(buf, owner.coords.size());
      for (double c : owner.coords) append_f64(buf, c);
      break;
  }
  buf.push_back(static_cast<std::uint8_t>(stream));
  append_u64(buf, t);
  append_u64(buf, idx);
  return siphash24(key_, buf);
}

double RandomOracle::uniform(const OwnerId& owner, StreamTag stream,
                             std::uint64_t t, std::uint64_t idx) const {
  return static_cast<double>(word(owner, stream, t, idx)) * 0x1p-64;
}

RandomOracle RandomOracle::derived(std::uint64_t salt) const {
  std::array<std::uint8_t, 16> key{};
  OwnerId g = OwnerId::global();
  const std::uint64_t a = word(g, StreamTag::kProcess, salt, 0x5a17);
  const std::uint64_t b = word(g, StreamTag::kProcess, salt, 0x5a18);
  std::memcpy(key.data(), &a, 8);
  std::memcpy(key.data() + 8, &b, 8);
  return RandomOracle(key);
}

}  // namespace geocut::rng
