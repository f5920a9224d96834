#pragma once

// Shared plumbing: deterministic RNG helpers, FNV-1a hashing, ISO-8601
// timestamps, and small file/string utilities used across the library.

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trolldet::util {

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Randomness. All seeded operations draw from this wrapper only, so results
// are reproducible for a fixed seed regardless of standard-library internals
// (std::uniform_int_distribution et al. are implementation-defined).

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Unbiased integer in [0, n) via rejection sampling.
    std::size_t below(std::size_t n) {
        if (n == 0) throw Error("Rng::below: n must be positive");
        const std::uint64_t bound = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= bound);
        return static_cast<std::size_t>(x % n);
    }

    double uniform() {  // [0, 1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {  // Fisher-Yates
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

  private:
    std::mt19937_64 eng_;
};

// Derives an independent stream seed, so one user-facing seed can feed
// several stages without correlation.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed ^ (0xA24BAED4963EE407ull + tag);
    return splitmix64(s);
}

// ---------------------------------------------------------------------------
// FNV-1a 64-bit. Non-cryptographic; used for manifests and content hashes.

inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t v, std::uint64_t h) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xFF;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xF];
    return s;
}

// ---------------------------------------------------------------------------
// Calendar timestamps. Comments carry local wall-clock time plus a UTC
// offset; metadata features read the wall-clock fields (posting behavior is
// local), ordering uses the UTC instant.

struct DateTime {
    int year = 1970;
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    int second = 0;
    int offset_minutes = 0;  // local = UTC + offset

    friend bool operator==(const DateTime&, const DateTime&) = default;

    // Days since 1970-01-01 for the local calendar date (Howard Hinnant's
    // civil-days algorithm).
    std::int64_t civil_days() const {
        std::int64_t y = year;
        const int m = month;
        y -= m <= 2;
        const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
    }

    std::int64_t epoch_seconds() const {  // UTC instant
        return civil_days() * 86400 + hour * 3600 + minute * 60 + second -
               std::int64_t(offset_minutes) * 60;
    }

    int weekday() const {  // 0 = Monday .. 6 = Sunday, of the local date
        std::int64_t d = civil_days() + 3;  // 1970-01-01 was a Thursday
        return static_cast<int>(((d % 7) + 7) % 7);
    }

    bool is_weekend() const { return weekday() >= 5; }

    std::string to_iso8601() const {
        char buf[40];
        if (offset_minutes == 0) {
            std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                          year, month, day, hour, minute, second);
        } else {
            const int om = offset_minutes < 0 ? -offset_minutes : offset_minutes;
            std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d%c%02d:%02d",
                          year, month, day, hour, minute, second,
                          offset_minutes < 0 ? '-' : '+', om / 60, om % 60);
        }
        return buf;
    }
};

inline bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int y, int m) {
    static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return d[m - 1];
}

// Parses "YYYY-MM-DDTHH:MM:SS" with optional fractional seconds (discarded)
// and optional zone "Z" / "+HH:MM" / "+HHMM"; a missing zone means UTC.
// Returns nullopt on any malformed or out-of-range field.
inline std::optional<DateTime> parse_iso8601(std::string_view s) {
    auto digit = [&](std::size_t i) -> int {
        if (i >= s.size() || s[i] < '0' || s[i] > '9') return -1;
        return s[i] - '0';
    };
    auto num2 = [&](std::size_t i) -> int {
        int a = digit(i), b = digit(i + 1);
        return (a < 0 || b < 0) ? -1 : a * 10 + b;
    };
    if (s.size() < 19) return std::nullopt;
    int y = 0;
    for (int i = 0; i < 4; ++i) {
        int d = digit(i);
        if (d < 0) return std::nullopt;
        y = y * 10 + d;
    }
    if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
        s[13] != ':' || s[16] != ':')
        return std::nullopt;
    DateTime dt;
    dt.year = y;
    dt.month = num2(5);
    dt.day = num2(8);
    dt.hour = num2(11);
    dt.minute = num2(14);
    dt.second = num2(17);
    if (dt.month < 1 || dt.month > 12 || dt.day < 1 || dt.hour < 0 ||
        dt.minute < 0 || dt.second < 0)
        return std::nullopt;
    if (dt.day > days_in_month(dt.year, dt.month) || dt.hour > 23 ||
        dt.minute > 59 || dt.second > 60)
        return std::nullopt;
    std::size_t i = 19;
    if (i < s.size() && s[i] == '.') {
        ++i;
        std::size_t frac = 0;
        while (i < s.size() && digit(i) >= 0) {
            ++i;
            ++frac;
        }
        if (frac == 0) return std::nullopt;
    }
    if (i == s.size()) return dt;  // no zone: UTC
    if (s[i] == 'Z') return (i + 1 == s.size()) ? std::optional(dt) : std::nullopt;
    if (s[i] != '+' && s[i] != '-') return std::nullopt;
    const int sign = s[i] == '-' ? -1 : 1;
    ++i;
    int oh = num2(i);
    if (oh < 0 || oh > 23) return std::nullopt;
    i += 2;
    if (i < s.size() && s[i] == ':') ++i;
    int om = 0;
    if (i < s.size()) {
        om = num2(i);
        if (om < 0 || om > 59 || i + 2 != s.size()) return std::nullopt;
        i += 2;
    }
    dt.offset_minutes = sign * (oh * 60 + om);
    return dt;
}

// ---------------------------------------------------------------------------
// Files and strings.

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + path);
}

inline std::uint64_t fnv1a64_file(const std::string& path) {
    return fnv1a64(read_file(path));
}

inline std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' ||
                     s[e - 1] == '\n'))
        --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

// Lines of a text file with optional '#'-comment and blank-line skipping.
inline std::vector<std::string> read_lines(const std::string& path,
                                           bool skip_comments = false) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skip_comments) {
            auto t = trim(line);
            if (t.empty() || t.front() == '#') continue;
        }
        lines.push_back(line);
    }
    return lines;
}

}  // namespace trolldet::util
