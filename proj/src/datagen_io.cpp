#include "bdc/datagen_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "instance container assumes a little-endian host");

namespace bdc {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& si : s) si = splitmix64(x);
}

std::uint64_t Xoshiro256pp::next() {
  const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
  const std::uint64_t t = s[1] << 17;
  s[2] ^= s[0];
  s[3] ^= s[1];
  s[1] ^= s[2];
  s[0] ^= s[3];
  s[2] ^= t;
  s[3] = rotl(s[3], 45);
  return result;
}

double Xoshiro256pp::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double NormalSampler::next() {
  if (has_spare) {
    has_spare = false;
    return spare;
  }
  double u, v, q;
  do {
    u = 2.0 * rng.uniform01() - 1.0;
    v = 2.0 * rng.uniform01() - 1.0;
    q = u * u + v * v;
  } while (q >= 1.0 || q == 0.0);
  const double f = std::sqrt(-2.0 * std::log(q) / q);
  spare = v * f;
  has_spare = true;
  return u * f;
}

double ProblemInstance::noise_norm() const {
  if (!x_orig) throw std::logic_error("noise_norm: instance has no x_orig");
  Vec ax;
  gemv_n(A, *x_orig, ax);
  Vec r(b.size());
  kernels::lincomb(1.0, b.data(), -1.0, ax.data(), r.data(), b.size());
  return norm2(r);
}

ProblemInstance gen_instance(std::size_t m, std::size_t n, std::size_t s, std::uint64_t seed) {
  if (m < 1 || n < 1 || s < 1 || s > n)
    throw std::invalid_argument("gen_instance: require m >= 1 and 0 < s <= n");
  NormalSampler gauss(seed);
  ProblemInstance inst;
  inst.s = s;
  inst.seed = seed;
  inst.A = Mat(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    double* col = inst.A.col(j);
    bool nonzero = false;
    do {
      for (std::size_t i = 0; i < m; ++i) {
        col[i] = gauss.next();
        nonzero |= col[i] != 0.0;
      }
    } while (!nonzero);
  }
  // support: prefix of a partial Fisher-Yates shuffle, one uniform per index
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < s; ++i) {
    const auto j = i + static_cast<std::size_t>(gauss.rng.uniform01() * static_cast<double>(n - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<std::size_t> support(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(s));
  std::sort(support.begin(), support.end());

  Vec x(n, 0.0);
  for (std::size_t i : support) x[i] = gauss.next();
  inst.x_orig = std::move(x);

  Vec noise(m);
  for (std::size_t i = 0; i < m; ++i) noise[i] = gauss.next();

  gemv_n(inst.A, *inst.x_orig, inst.b);
  kernels::axpy(0.01, noise.data(), inst.b.data(), m);
  return inst;
}

namespace {

constexpr std::uint32_t kCrcPoly = 0xedb88320u;

const std::array<std::uint32_t, 256>& crc_table() {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1u) ? (kCrcPoly ^ (c >> 1)) : (c >> 1);
      t[i] = c;
    }
    return t;
  }();
  return table;
}

void write_doubles(std::ostream& os, const double* p, std::size_t n, std::uint32_t& crc) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(p);
  const std::size_t len = n * sizeof(double);
  const auto& t = crc_table();
  for (std::size_t i = 0; i < len; ++i) crc = t[(crc ^ bytes[i]) & 0xffu] ^ (crc >> 8);
  os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(len));
}

void read_doubles(std::istream& is, double* p, std::size_t n, std::uint32_t& crc) {
  const std::size_t len = n * sizeof(double);
  is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(is.gcount()) != len)
    throw std::runtime_error("instance file truncated");
  const auto* bytes = reinterpret_cast<const unsigned char*>(p);
  const auto& t = crc_table();
  for (std::size_t i = 0; i < len; ++i) crc = t[(crc ^ bytes[i]) & 0xffu] ^ (crc >> 8);
}

}  // namespace

std::uint32_t crc32(const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  const auto& t = crc_table();
  std::uint32_t crc = 0xffffffffu;
  for (std::size_t i = 0; i < len; ++i) crc = t[(crc ^ bytes[i]) & 0xffu] ^ (crc >> 8);
  return crc ^ 0xffffffffu;
}

void save_instance(const std::string& path, const ProblemInstance& inst) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  nlohmann::json header = {
      {"magic", "BDC1"},          {"version", 1},
      {"m", inst.m()},            {"n", inst.n()},
      {"s", inst.s},              {"seed", inst.seed},
      {"layout", "column-major"}, {"dtype", "f64-le"},
      {"has_x_orig", inst.x_orig.has_value()},
  };
  os << header.dump() << '\n';
  std::uint32_t crc = 0xffffffffu;
  write_doubles(os, inst.A.data.data(), inst.A.data.size(), crc);
  write_doubles(os, inst.b.data(), inst.b.size(), crc);
  if (inst.x_orig) write_doubles(os, inst.x_orig->data(), inst.x_orig->size(), crc);
  crc ^= 0xffffffffu;
  unsigned char tail[4] = {static_cast<unsigned char>(crc & 0xffu),
                           static_cast<unsigned char>((crc >> 8) & 0xffu),
                           static_cast<unsigned char>((crc >> 16) & 0xffu),
                           static_cast<unsigned char>((crc >> 24) & 0xffu)};
  os.write(reinterpret_cast<const char*>(tail), 4);
  if (!os) throw std::runtime_error("write failed: " + path);
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("instance file truncated");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("bad instance header: ") + e.what());
  }
  if (header.value("magic", "") != "BDC1") throw std::runtime_error("bad magic, not a BDC1 file");
  if (header.value("version", 0) != 1)
    throw std::runtime_error("unsupported instance format version");
  if (header.value("dtype", "") != "f64-le" || header.value("layout", "") != "column-major")
    throw std::runtime_error("unsupported instance payload encoding");
  ProblemInstance inst;
  const auto m = header.at("m").get<std::size_t>();
  const auto n = header.at("n").get<std::size_t>();
  inst.s = header.at("s").get<std::size_t>();
  inst.seed = header.at("seed").get<std::uint64_t>();
  inst.A = Mat(m, n);
  inst.b.resize(m);
  std::uint32_t crc = 0xffffffffu;
  read_doubles(is, inst.A.data.data(), inst.A.data.size(), crc);
  read_doubles(is, inst.b.data(), m, crc);
  if (header.at("has_x_orig").get<bool>()) {
    Vec x(n);
    read_doubles(is, x.data(), n, crc);
    inst.x_orig = std::move(x);
  }
  crc ^= 0xffffffffu;
  unsigned char tail[4];
  is.read(reinterpret_cast<char*>(tail), 4);
  if (is.gcount() != 4) throw std::runtime_error("instance file truncated");
  const std::uint32_t stored = static_cast<std::uint32_t>(tail[0]) |
                               (static_cast<std::uint32_t>(tail[1]) << 8) |
                               (static_cast<std::uint32_t>(tail[2]) << 16) |
                               (static_cast<std::uint32_t>(tail[3]) << 24);
  if (stored != crc) throw std::runtime_error("instance checksum mismatch");
  return inst;
}

namespace {

std::vector<std::vector<double>> parse_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0, field = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      const std::string cell = line.substr(start, comma - start);
      ++field;
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
        row.push_back(v);
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << path << ": parse error at row " << lineno << ", column " << field << ": '" << cell
            << "'";
        throw std::runtime_error(msg.str());
      }
      start = comma + 1;
      if (comma == line.size()) break;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << path << ": ragged row " << lineno << ": expected " << rows.front().size()
          << " fields, got " << row.size();
      throw std::runtime_error(msg.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty CSV");
  return rows;
}

}  // namespace

ProblemInstance load_csv_matrix(const std::string& path_A, const std::string& path_b) {
  const auto arows = parse_csv(path_A);
  const auto brows = parse_csv(path_b);
  const std::size_t m = arows.size();
  const std::size_t n = arows.front().size();
  if (brows.size() != m || brows.front().size() != 1) {
    std::ostringstream msg;
    msg << path_b << ": expected " << m << " rows of one value, got " << brows.size() << " rows of "
        << brows.front().size();
    throw std::runtime_error(msg.str());
  }
  ProblemInstance inst;
  inst.A = Mat(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) inst.A(i, j) = arows[i][j];
  inst.b.resize(m);
  for (std::size_t i = 0; i < m; ++i) inst.b[i] = brows[i][0];
  return inst;
}

}  // namespace bdc
