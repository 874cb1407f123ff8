#include "io/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace geocut::io {

namespace {

void parse_header(const std::string& line, double& p,
                  std::optional<std::int64_t>& delta) {
  std::istringstream in(line.substr(1));
  std::string tok;
  while (in >> tok) {
    if (tok.rfind("p=", 0) == 0) p = std::stod(tok.substr(2));
    if (tok.rfind("delta=", 0) == 0) delta = std::stoll(tok.substr(6));
    // d= is informational; the row widths carry the dimension.
  }
}

core::Point parse_point(const std::string& line) {
  std::string cleaned = line;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  core::Point x;
  double v;
  while (in >> v) x.push_back(v);
  if (!in.eof()) throw std::runtime_error("bad coordinate in: " + line);
  return x;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

core::Dataset parse_dataset(const std::string& text) {
  core::Dataset ds;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      parse_header(line, ds.p, ds.delta);
      continue;
    }
    core::Point x = parse_point(line);
    if (x.empty()) continue;
    if (!ds.points.empty() && x.size() != ds.points.front().size())
      throw std::runtime_error("inconsistent point dimension");
    ds.points.push_back(std::move(x));
  }
  return ds;
}

core::Dataset load_dataset(const std::string& path) {
  return parse_dataset(read_file(path));
}

void save_dataset(const core::Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "# d=" << ds.dim() << " p=" << ds.p;
  if (ds.delta.has_value()) out << " delta=" << *ds.delta;
  out << "\n";
  for (const auto& x : ds.points) {
    for (std::size_t k = 0; k < x.size(); ++k) out << (k ? " " : "") << x[k];
    out << "\n";
  }
}

StreamFile parse_stream(const std::string& text) {
  StreamFile sf;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      parse_header(line, sf.p, sf.delta);
      continue;
    }
    std::istringstream ls(line);
    std::string sign;
    ls >> sign;
    if (sign != "+" && sign != "-")
      throw std::runtime_error("stream line must start with + or -: " + line);
    std::string rest;
    std::getline(ls, rest);
    StreamOp op;
    op.insert = sign == "+";
    op.point = parse_point(rest);
    if (op.point.empty()) throw std::runtime_error("empty point in stream line");
    sf.ops.push_back(std::move(op));
  }
  return sf;
}

StreamFile load_stream(const std::string& path) {
  return parse_stream(read_file(path));
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, sep)) parts.push_back(tok);
  return parts;
}

double gen_uniform(const rng::RandomOracle& oracle, std::uint64_t t, std::uint64_t idx) {
  return oracle.uniform(rng::OwnerId::global(), rng::StreamTag::kDatasetGen, t, idx);
}

}  // namespace

core::Dataset gen_dataset(const std::string& spec, const rng::RandomOracle& oracle) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw std::invalid_argument("empty generator spec");
  core::Dataset ds;

  if (parts[0] == "uniform-grid") {
    if (parts.size() != 4) throw std::invalid_argument("uniform-grid:<delta>:<d>:<n>");
    const std::int64_t delta = std::stoll(parts[1]);
    const std::size_t d = std::stoull(parts[2]);
    const std::size_t n = std::stoull(parts[3]);
    double cells = std::pow(static_cast<double>(delta), static_cast<double>(d));
    if (static_cast<double>(n) > cells)
      throw std::invalid_argument("n exceeds delta^d grid cells");
    ds.delta = delta;
    std::set<core::Point> seen;
    std::uint64_t attempt = 0;
    while (ds.points.size() < n) {
      core::Point x(d);
      for (std::size_t k = 0; k < d; ++k)
        x[k] = 1.0 + std::floor(gen_uniform(oracle, attempt, k) *
                                static_cast<double>(delta));
      ++attempt;
      if (seen.insert(x).second) ds.points.push_back(std::move(x));
    }
    return ds;
  }

  if (parts[0] == "gaussian-clusters") {
    if (parts.size() != 4) throw std::invalid_argument("gaussian-clusters:<k>:<sigma>:<n>");
    const std::size_t k = std::stoull(parts[1]);
    const double sigma = std::stod(parts[2]);
    const std::size_t n = std::stoull(parts[3]);
    if (k < 1) throw std::invalid_argument("need at least one cluster");
    const std::size_t d = 2;
    std::vector<core::Point> centers(k, core::Point(d));
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t j = 0; j < d; ++j)
        centers[c][j] = 100.0 * gen_uniform(oracle, c, 1000 + j);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = i % k;
      core::Point x(d);
      for (std::size_t j = 0; j < d; ++j) {
        // Box-Muller from two addressed uniforms.
        const double u1 = std::max(gen_uniform(oracle, 2 * i + 7, j), 1e-12);
        const double u2 = gen_uniform(oracle, 2 * i + 8, 100 + j);
        const double g =
            std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        x[j] = centers[c][j] + sigma * g;
      }
      ds.points.push_back(std::move(x));
    }
    return ds;
  }

  if (parts[0] == "simplex") {
    if (parts.size() != 2) throw std::invalid_argument("simplex:<n>");
    const std::size_t n = std::stoull(parts[1]);
    for (std::size_t i = 0; i < n; ++i) {
      core::Point x(n, 0.0);
      x[i] = 1.0;
      ds.points.push_back(std::move(x));
    }
    return ds;
  }

  throw std::invalid_argument("unknown generator: " + parts[0]);
}

}  // namespace geocut::io
