#include "hysterion/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "hysterion/errors.hpp"

namespace hyst {

std::string fmt_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream body;
  body << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return body.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string path_csv(const Path& path) {
  std::ostringstream out;
  out << "t,x\n";
  for (std::size_t k = 0; k < path.states.size(); ++k)
    out << fmt_double(path.time_at(k)) << ',' << fmt_double(path.states[k]) << '\n';
  return out.str();
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "left,right,count\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k)
    out << fmt_double(h.edges[k]) << ',' << fmt_double(h.edges[k + 1]) << ','
        << h.counts[k] << '\n';
  return out.str();
}

std::string samples_csv(const std::vector<CycleObservables>& samples) {
  std::ostringstream out;
  out << "index,seed,area,crossed,tau0,lambda0\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const CycleObservables& o = samples[i];
    out << i << ',' << o.seed << ',' << fmt_double(o.area) << ','
        << (o.crossed ? 1 : 0) << ',';
    if (o.crossed) out << fmt_double(*o.tau0);
    out << ',';
    if (o.crossed) out << fmt_double(*o.lambda0);
    out << '\n';
  }
  return out.str();
}

namespace {

void stat_rows(std::ostringstream& out, const char* name,
               const ObservableStats& st) {
  out << name << ",count," << st.n << '\n';
  if (st.n < 1) return;
  out << name << ",mean," << fmt_double(st.moments.mean) << '\n';
  if (st.n >= 2) {
    out << name << ",variance," << fmt_double(st.moments.variance()) << '\n';
    if (st.moments.m2 > 0.0) {
      out << name << ",skewness," << fmt_double(st.moments.skewness()) << '\n';
      out << name << ",excess_kurtosis," << fmt_double(st.moments.excess_kurtosis())
          << '\n';
    }
  }
  out << name << ",min," << fmt_double(st.min) << '\n';
  static const char* kQuantileNames[7] = {"q01", "q05", "q25", "median",
                                          "q75", "q95", "q99"};
  for (int i = 0; i < 7; ++i)
    out << name << ',' << kQuantileNames[i] << ','
        << fmt_double(st.quantiles[static_cast<std::size_t>(i)]) << '\n';
  out << name << ",max," << fmt_double(st.max) << '\n';
}

nlohmann::json stats_json(const ObservableStats& st) {
  nlohmann::json j;
  j["count"] = st.n;
  if (st.n < 1) return j;
  j["mean"] = st.moments.mean;
  if (st.n >= 2) {
    j["variance"] = st.moments.variance();
    if (st.moments.m2 > 0.0) {
      j["skewness"] = st.moments.skewness();
      j["excess_kurtosis"] = st.moments.excess_kurtosis();
    }
  }
  j["min"] = st.min;
  j["max"] = st.max;
  nlohmann::json q;
  static const char* kQuantileNames[7] = {"q01", "q05", "q25", "median",
                                          "q75", "q95", "q99"};
  for (int i = 0; i < 7; ++i)
    q[kQuantileNames[i]] = st.quantiles[static_cast<std::size_t>(i)];
  j["quantiles"] = q;
  return j;
}

}  // namespace

std::string summary_csv(const EnsembleSummary& s) {
  std::ostringstream out;
  out << "section,name,value\n";
  out << "run,n," << s.n << '\n';
  out << "run,seed_base," << s.seed_base << '\n';
  out << "run,index_offset," << s.index_offset << '\n';
  out << "run,t0," << fmt_double(s.t0) << '\n';
  out << "run,span," << fmt_double(s.span) << '\n';
  out << "run,dt," << fmt_double(s.dt) << '\n';
  out << "run,x0," << fmt_double(s.x0) << '\n';
  stat_rows(out, "area", s.area);
  out << "crossing,count," << s.crossed << '\n';
  out << "crossing,rate," << fmt_double(s.crossing_rate) << '\n';
  const WilsonInterval w = wilson_interval(s.crossed, s.n);
  out << "crossing,rate_lo," << fmt_double(w.lo) << '\n';
  out << "crossing,rate_hi," << fmt_double(w.hi) << '\n';
  if (s.crossed > 0) {
    stat_rows(out, "tau0", s.tau0);
    stat_rows(out, "lambda0", s.lambda0);
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "x,eps,sigma,amplitude,statistic,mc_error,regime,borderline,extra\n";
  for (const SweepPoint& pt : points) {
    out << fmt_double(pt.x) << ',' << fmt_double(pt.params.epsilon) << ','
        << fmt_double(pt.params.sigma) << ',' << fmt_double(pt.params.amplitude)
        << ',' << fmt_double(pt.statistic) << ',' << fmt_double(pt.mc_error) << ','
        << to_string(pt.regime) << ',' << (pt.borderline ? 1 : 0) << ','
        << fmt_double(pt.extra) << '\n';
  }
  return out.str();
}

nlohmann::json summary_json(const EnsembleSummary& s) {
  nlohmann::json j;
  j["n"] = s.n;
  j["seed_base"] = s.seed_base;
  j["index_offset"] = s.index_offset;
  j["t0"] = s.t0;
  j["span"] = s.span;
  j["dt"] = s.dt;
  j["x0"] = s.x0;
  j["area"] = stats_json(s.area);
  j["crossed"] = s.crossed;
  j["crossing_rate"] = s.crossing_rate;
  const WilsonInterval w = wilson_interval(s.crossed, s.n);
  j["crossing_rate_lo"] = w.lo;
  j["crossing_rate_hi"] = w.hi;
  if (s.crossed > 0) {
    j["tau0"] = stats_json(s.tau0);
    j["lambda0"] = stats_json(s.lambda0);
  }
  j["area_histogram"] = {{"edges", s.area_hist.edges},
                         {"counts", s.area_hist.counts}};
  return j;
}

nlohmann::json report_json(const ScalingReport& rep) {
  nlohmann::json j;
  j["law"] = to_string(rep.law);
  j["axis"] = to_string(rep.axis);
  j["theory_exponent"] = rep.theory;
  j["tolerance"] = rep.tolerance;
  j["r2_min"] = rep.r2_min;
  j["pass"] = rep.pass;
  j["fit"] = {{"exponent", rep.fit.exponent},
              {"log_prefactor", rep.fit.log_prefactor},
              {"stderr_exponent", rep.fit.stderr_exponent},
              {"r2", rep.fit.r2},
              {"n_points", rep.fit.n_points}};
  nlohmann::json pts = nlohmann::json::array();
  for (const SweepPoint& pt : rep.points) {
    pts.push_back({{"x", pt.x},
                   {"eps", pt.params.epsilon},
                   {"sigma", pt.params.sigma},
                   {"amplitude", pt.params.amplitude},
                   {"statistic", pt.statistic},
                   {"mc_error", pt.mc_error},
                   {"regime", to_string(pt.regime)},
                   {"borderline", pt.borderline},
                   {"extra", pt.extra}});
  }
  j["points"] = pts;
  return j;
}

namespace {

inline std::uint32_t rotr(std::uint32_t x, int n) {
  return (x >> n) | (x << (32 - n));
}

constexpr std::uint32_t kShaK[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

void sha_compress(std::uint32_t h[8], const unsigned char* p) {
  std::uint32_t w[64];
  for (int i = 0; i < 16; ++i) {
    w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
           (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
  }
  for (int i = 16; i < 64; ++i) {
    const std::uint32_t s0 =
        rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
    const std::uint32_t s1 =
        rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
    w[i] = w[i - 16] + s0 + w[i - 7] + s1;
  }
  std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3];
  std::uint32_t e = h[4], f = h[5], g = h[6], hh = h[7];
  for (int i = 0; i < 64; ++i) {
    const std::uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
    const std::uint32_t ch = (e & f) ^ (~e & g);
    const std::uint32_t t1 = hh + S1 + ch + kShaK[i] + w[i];
    const std::uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
    const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
    const std::uint32_t t2 = S0 + maj;
    hh = g;
    g = f;
    f = e;
    e = d + t1;
    d = c;
    c = b;
    b = a;
    a = t1 + t2;
  }
  h[0] += a;
  h[1] += b;
  h[2] += c;
  h[3] += d;
  h[4] += e;
  h[5] += f;
  h[6] += g;
  h[7] += hh;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                        0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  const unsigned char* p = reinterpret_cast<const unsigned char*>(data.data());
  std::size_t n = data.size();
  while (n >= 64) {
    sha_compress(h, p);
    p += 64;
    n -= 64;
  }
  unsigned char tail[128] = {0};
  std::size_t tn = n;
  for (std::size_t i = 0; i < n; ++i) tail[i] = p[i];
  tail[tn++] = 0x80;
  std::size_t block = tn <= 56 ? 64 : 128;
  const std::uint64_t bits = std::uint64_t(data.size()) * 8;
  for (int i = 0; i < 8; ++i)
    tail[block - 8 + static_cast<std::size_t>(i)] =
        static_cast<unsigned char>(bits >> (56 - 8 * i));
  sha_compress(h, tail);
  if (block == 128) sha_compress(h, tail + 64);
  char hex[65];
  for (int i = 0; i < 8; ++i)
    std::snprintf(hex + 8 * i, 9, "%08x", h[i]);
  return std::string(hex, 64);
}

void Manifest::add_output(const std::string& path) {
  const std::string content = read_text_file(path);
  ManifestEntry e;
  e.path = path;
  e.bytes = static_cast<long long>(content.size());
  e.sha256 = sha256_hex(content);
  outputs.push_back(std::move(e));
}

nlohmann::json Manifest::to_json() const {
  nlohmann::json j;
  j["tool_version"] = tool_version;
  j["command"] = command;
  j["config"] = config;
  j["started_utc"] = started_utc;
  j["finished_utc"] = finished_utc;
  j["reports"] = reports;
  nlohmann::json outs = nlohmann::json::array();
  for (const ManifestEntry& e : outputs)
    outs.push_back(
        {{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  j["outputs"] = outs;
  return j;
}

std::string canonical_manifest_digest(const nlohmann::json& manifest) {
  nlohmann::json j = manifest;
  j.erase("started_utc");
  j.erase("finished_utc");
  return sha256_hex(j.dump());
}

std::string Manifest::canonical_digest() const {
  return canonical_manifest_digest(to_json());
}

void Manifest::write(const std::string& path) const {
  write_text_file(path, to_json().dump(2) + "\n");
}

std::string utc_now_iso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hyst
