#include "surfns/checkpoint.hpp"

#include "surfns/errors.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace surfns {

namespace {

template <class T>
void put(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

class Cursor {
 public:
  explicit Cursor(const std::string& s) : s_(s) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > s_.size()) throw CheckpointError("checkpoint truncated");
    unsigned char b[sizeof(T)];
    std::memcpy(b, s_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    pos_ += sizeof(T);
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;
};

std::uint32_t crc_of(const char* data, size_t n) {
  return static_cast<std::uint32_t>(crc32(0L, reinterpret_cast<const Bytef*>(data), static_cast<uInt>(n)));
}

std::uint64_t pair_count(int L) { return static_cast<std::uint64_t>(L + 1) * (L + 2) / 2 - 1; }

}  // namespace

std::string encode_checkpoint(const Checkpoint& c) {
  const SpectralState& s = c.state;
  if (s.coeffs.size() != toroidal_count(s.L)) throw ParameterError("checkpoint: coefficient count does not match L");
  std::string out = "SNSK";
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint8_t>(out, c.kind == SurfaceKind::Sphere ? 0 : 1);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.L));
  put<double>(out, c.R);
  put<double>(out, c.r);
  put<double>(out, s.t);
  put<std::uint64_t>(out, pair_count(s.L));
  for (int l = 1; l <= s.L; ++l)
    for (int m = 0; m <= l; ++m) {
      put<double>(out, s(l, m));
      put<double>(out, m == 0 ? 0.0 : s(l, -m));
    }
  put<std::uint32_t>(out, crc_of(out.data(), out.size()));
  return out;
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  if (bytes.size() < 4 || bytes.compare(0, 4, "SNSK") != 0) throw CheckpointError("not a checkpoint (bad magic)");
  if (bytes.size() < 4 + 4 + 1 + 4 + 3 * 8 + 8 + 4) throw CheckpointError("checkpoint truncated");
  Cursor cur(bytes);
  cur.get<std::uint32_t>();  // magic
  const auto version = cur.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  const auto kind = cur.get<std::uint8_t>();
  const auto L = cur.get<std::uint32_t>();
  if (kind > 1) throw CheckpointError("checkpoint: unknown geometry kind");
  if (L < 1 || L > 4096) throw CheckpointError("checkpoint: implausible truncation L");
  const std::uint64_t n_expect = pair_count(static_cast<int>(L));
  const size_t total = 4 + 4 + 1 + 4 + 3 * 8 + 8 + n_expect * 16 + 4;
  if (bytes.size() < total) throw CheckpointError("checkpoint truncated");
  if (bytes.size() > total) throw CheckpointError("checkpoint has trailing bytes");
  std::uint32_t stored;
  {
    Cursor tail(bytes.substr(total - 4));
    stored = tail.get<std::uint32_t>();
  }
  if (stored != crc_of(bytes.data(), total - 4)) throw CheckpointError("checkpoint CRC mismatch (corrupted file)");

  Checkpoint c;
  c.kind = kind == 0 ? SurfaceKind::Sphere : SurfaceKind::Torus;
  c.R = cur.get<double>();
  c.r = cur.get<double>();
  const double t = cur.get<double>();
  if (cur.get<std::uint64_t>() != n_expect) throw CheckpointError("checkpoint: pair count does not match L");
  SpectralState s(static_cast<int>(L));
  s.t = t;
  for (int l = 1; l <= static_cast<int>(L); ++l)
    for (int m = 0; m <= l; ++m) {
      const double a = cur.get<double>(), b = cur.get<double>();
      s(l, m) = a;
      if (m > 0) s(l, -m) = b;
      else if (b != 0.0) throw CheckpointError("checkpoint: nonzero sine entry for m = 0");
    }
  c.state = std::move(s);
  return c;
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
  const std::string bytes = encode_checkpoint(c);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("write to '" + path + "' failed");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return decode_checkpoint(ss.str());
}

}  // namespace surfns
