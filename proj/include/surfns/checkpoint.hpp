#pragma once

// Binary checkpoint of a spectral state. Layout (little-endian):
//
//   "SNSK"               4 bytes
//   version              u32 (currently 1)
//   geometry kind        u8  (0 sphere, 1 torus)
//   L                    u32
//   R, r                 f64, f64 (r = 0 on the sphere)
//   t                    f64
//   n                    u64, number of (cos, sin) pairs = (L+1)(L+2)/2 - 1
//   payload              n pairs of f64 for l = 1..L, m = 0..l in that order;
//                        the sine entry of m = 0 is stored as 0
//   crc                  u32, CRC-32 of everything before it
//
// Only coefficients are stored. Solver history (the Adams-Bashforth term and
// the energy ledger) restarts at the loaded time.

#include "surfns/harmonics.hpp"

#include <string>

namespace surfns {

constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  SurfaceKind kind = SurfaceKind::Sphere;
  double R = 1.0;
  double r = 0.0;
  SpectralState state;
};

std::string encode_checkpoint(const Checkpoint& c);
Checkpoint decode_checkpoint(const std::string& bytes);

void save_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace surfns
