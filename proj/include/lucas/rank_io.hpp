#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "lucas/rank.hpp"

namespace lucas {

// Serialized rank table, little-endian regardless of host:
//   magic "ZRNK" | version u32 | a1 i64 | a2 i64 | limit u64 | count u64
//   followed by count * { p u64, z u64 } sorted by p ascending.
inline constexpr char kRankTableMagic[4] = {'Z', 'R', 'N', 'K'};
inline constexpr u32 kRankTableVersion = 1;

namespace detail {

inline void put_u32(std::ostream& os, u32 v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
  os.write(b, 4);
}

inline void put_u64(std::ostream& os, u64 v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  os.write(b, 8);
}

inline u32 get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4))
    raise(errc::bad_table, "truncated rank table");
  u32 v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<u32>(b[i]) << (8 * i);
  return v;
}

inline u64 get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8))
    raise(errc::bad_table, "truncated rank table");
  u64 v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline void save_rank_table(const RankTable& t, std::ostream& os) {
  os.write(kRankTableMagic, 4);
  detail::put_u32(os, kRankTableVersion);
  detail::put_u64(os, static_cast<u64>(t.params.a1));
  detail::put_u64(os, static_cast<u64>(t.params.a2));
  detail::put_u64(os, t.limit);
  detail::put_u64(os, t.entries.size());
  for (const auto& [p, z] : t.entries) {
    detail::put_u64(os, p);
    detail::put_u64(os, z);
  }
  if (!os) raise(errc::io_failure, "rank table write failed");
}

inline void save_rank_table(const RankTable& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) raise(errc::io_failure, "cannot open " + path + " for writing");
  save_rank_table(t, f);
  f.close();
  if (!f) raise(errc::io_failure, "rank table write failed: " + path);
}

inline RankTable load_rank_table(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != std::string(kRankTableMagic, 4))
    raise(errc::bad_table, "bad magic; not a rank table");
  const u32 version = detail::get_u32(is);
  if (version != kRankTableVersion)
    raise(errc::bad_table, "unsupported rank table version " + std::to_string(version));
  const i64 a1 = static_cast<i64>(detail::get_u64(is));
  const i64 a2 = static_cast<i64>(detail::get_u64(is));
  RankTable t;
  try {
    t.params = validate_params(a1, a2);
  } catch (const error& e) {
    raise(errc::bad_table, std::string("invalid coefficients in table: ") + e.what());
  }
  t.limit = detail::get_u64(is);
  const u64 count = detail::get_u64(is);
  t.entries.reserve(count);
  u64 prev = 0;
  for (u64 i = 0; i < count; ++i) {
    const u64 p = detail::get_u64(is);
    const u64 z = detail::get_u64(is);
    if (p <= prev || p > t.limit || z == 0)
      raise(errc::bad_table, "rank table entries out of order or out of range");
    t.entries.emplace_back(p, z);
    prev = p;
  }
  return t;
}

inline RankTable load_rank_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) raise(errc::io_failure, "cannot open " + path);
  return load_rank_table(f);
}

}  // namespace lucas
