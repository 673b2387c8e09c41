#include "dmlab/table_cache.hpp"

#include "dmlab/errors.hpp"

#include <boost/crc.hpp>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace dmlab {

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'M', 'L', 'B'};

class CrcWriter {
public:
    explicit CrcWriter(std::ostream& out) : out_(out) {}

    void bytes(const void* data, std::size_t n) {
        crc_.process_bytes(data, n);
        out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    }
    template <typename U>
    void le(U value) {
        std::array<unsigned char, sizeof(U)> buf{};
        for (std::size_t i = 0; i < sizeof(U); ++i)
            buf[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xFF);
        bytes(buf.data(), buf.size());
    }
    std::uint32_t checksum() const { return crc_.checksum(); }

private:
    std::ostream& out_;
    boost::crc_32_type crc_;
};

class CrcReader {
public:
    explicit CrcReader(std::istream& in) : in_(in) {}

    void bytes(void* data, std::size_t n) {
        in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n)
            throw CacheCorrupt("table cache truncated");
        crc_.process_bytes(data, n);
    }
    template <typename U>
    U le() {
        std::array<unsigned char, sizeof(U)> buf{};
        bytes(buf.data(), buf.size());
        U value = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(buf[i]) << (8 * i);
        return value;
    }
    std::uint32_t checksum() const { return crc_.checksum(); }
    std::istream& stream() { return in_; }

private:
    std::istream& in_;
    boost::crc_32_type crc_;
};

// Bulk conversion of a sequence to/from little-endian records in chunks.
template <typename T, typename U>
void write_sequence(CrcWriter& w, const std::vector<T>& values) {
    constexpr std::size_t kChunk = 1 << 14;
    std::vector<unsigned char> buf;
    buf.reserve(kChunk * sizeof(U));
    for (std::size_t start = 0; start < values.size(); start += kChunk) {
        const std::size_t end = std::min(values.size(), start + kChunk);
        buf.clear();
        for (std::size_t i = start; i < end; ++i) {
            U bits;
            if constexpr (std::is_floating_point_v<T>)
                bits = std::bit_cast<U>(values[i]);
            else
                bits = static_cast<U>(values[i]);
            for (std::size_t b = 0; b < sizeof(U); ++b)
                buf.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xFF));
        }
        w.bytes(buf.data(), buf.size());
    }
}

template <typename T, typename U>
void read_sequence(CrcReader& r, std::vector<T>& values, std::size_t count) {
    constexpr std::size_t kChunk = 1 << 14;
    values.resize(count);
    std::vector<unsigned char> buf(kChunk * sizeof(U));
    for (std::size_t start = 0; start < count; start += kChunk) {
        const std::size_t end = std::min(count, start + kChunk);
        const std::size_t n = end - start;
        r.bytes(buf.data(), n * sizeof(U));
        for (std::size_t i = 0; i < n; ++i) {
            U bits = 0;
            for (std::size_t b = 0; b < sizeof(U); ++b)
                bits |= static_cast<U>(buf[i * sizeof(U) + b]) << (8 * b);
            if constexpr (std::is_floating_point_v<T>)
                values[start + i] = std::bit_cast<T>(bits);
            else
                values[start + i] = static_cast<T>(bits);
        }
    }
}

}  // namespace

void write_tables(std::ostream& out, const FactorTables& t) {
    CrcWriter w(out);
    w.bytes(kMagic.data(), kMagic.size());
    w.le<std::uint8_t>(kTableFormatVersion);
    w.le<std::uint64_t>(t.limit);
    write_sequence<std::uint32_t, std::uint32_t>(w, t.spf);
    write_sequence<std::uint8_t, std::uint8_t>(w, t.big_omega);
    write_sequence<std::int8_t, std::uint8_t>(w, t.lambda_vals);
    write_sequence<double, std::uint64_t>(w, t.mangoldt);
    const std::uint32_t crc = w.checksum();
    for (int i = 0; i < 4; ++i) out.put(static_cast<char>((crc >> (8 * i)) & 0xFF));
    if (!out) throw std::runtime_error("failed writing factor table cache");
}

FactorTables read_tables(std::istream& in) {
    CrcReader r(in);
    std::array<char, 4> magic{};
    r.bytes(magic.data(), magic.size());
    if (magic != kMagic) throw CacheCorrupt("not a DMLB table cache");
    const auto version = r.le<std::uint8_t>();
    if (version != kTableFormatVersion) throw CacheCorrupt("unsupported table cache version");
    FactorTables t;
    t.limit = r.le<std::uint64_t>();
    if (t.limit < 2 || t.limit > (std::uint64_t{1} << 31))
        throw CacheCorrupt("implausible table limit in cache");
    const std::size_t count = static_cast<std::size_t>(t.limit) + 1;
    read_sequence<std::uint32_t, std::uint32_t>(r, t.spf, count);
    read_sequence<std::uint8_t, std::uint8_t>(r, t.big_omega, count);
    read_sequence<std::int8_t, std::uint8_t>(r, t.lambda_vals, count);
    read_sequence<double, std::uint64_t>(r, t.mangoldt, count);
    const std::uint32_t expected = r.checksum();
    std::array<unsigned char, 4> trailer{};
    in.read(reinterpret_cast<char*>(trailer.data()), 4);
    if (in.gcount() != 4) throw CacheCorrupt("table cache missing CRC trailer");
    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i) stored |= std::uint32_t{trailer[i]} << (8 * i);
    if (stored != expected) throw CacheCorrupt("table cache CRC mismatch");
    return t;
}

std::filesystem::path table_cache_path(const std::filesystem::path& dir, std::uint64_t limit) {
    std::ostringstream name;
    name << "tables_N" << limit << "_v" << int{kTableFormatVersion} << ".dmlb";
    return dir / name.str();
}

CachedTables load_or_build_tables(const std::filesystem::path& dir, std::uint64_t limit,
                                  std::size_t memory_budget) {
    CachedTables out;
    out.path = table_cache_path(dir, limit);
    if (std::filesystem::exists(out.path)) {
        std::ifstream in(out.path, std::ios::binary);
        try {
            out.tables = read_tables(in);
            if (out.tables.limit == limit) {
                out.hit = true;
                return out;
            }
        } catch (const CacheCorrupt&) {
        }
        out.rebuilt_after_corruption = true;
    }
    out.tables = build_factor_tables(limit, memory_budget);
    std::filesystem::create_directories(dir);
    const auto tmp = out.path.string() + ".tmp";
    {
        std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
        if (!o) throw std::runtime_error("cannot write cache file " + tmp);
        write_tables(o, out.tables);
    }
    std::filesystem::rename(tmp, out.path);
    return out;
}

}  // namespace dmlab
