#pragma once

#include "dmlab/arith_tables.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace dmlab {

// Binary layout, all integers little-endian:
//   "DMLB" | version u8 | N u64 | spf u32[N+1] | Omega u8[N+1] | lambda i8[N+1]
//   | Lambda f64[N+1] | crc32 u32 over every preceding byte
inline constexpr std::uint8_t kTableFormatVersion = 1;

class CacheCorrupt : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_tables(std::ostream& out, const FactorTables& tables);
FactorTables read_tables(std::istream& in);

std::filesystem::path table_cache_path(const std::filesystem::path& dir, std::uint64_t limit);

struct CachedTables {
    FactorTables tables;
    bool hit = false;
    bool rebuilt_after_corruption = false;
    std::filesystem::path path;
};

// Loads tables for `limit` from `dir`, rebuilding (and rewriting) on a miss or bad CRC.
CachedTables load_or_build_tables(const std::filesystem::path& dir, std::uint64_t limit,
                                  std::size_t memory_budget = kDefaultTableBudget);

}  // namespace dmlab
